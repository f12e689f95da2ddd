#include "mnr/corpus.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mnr/rng.hpp"
#include "mnr/subtoken.hpp"

namespace mnr {

using nlohmann::json;

namespace {

bool record_from_json(const json& j, MethodRecord& rec) {
  if (!j.is_object()) return false;
  const char* required[] = {"class_name", "method_name", "return_type",
                            "parameters", "body_tokens", "source_path",
                            "is_test_context"};
  for (const char* key : required) {
    if (!j.contains(key)) return false;
  }
  try {
    rec.class_name = j["class_name"].get<std::string>();
    rec.method_name = j["method_name"].get<std::string>();
    rec.return_type = j["return_type"].get<std::string>();
    rec.parameters.clear();
    for (const auto& p : j["parameters"]) {
      if (!p.is_array() || p.size() != 2) return false;
      rec.parameters.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    rec.body_tokens = j["body_tokens"].get<std::vector<std::string>>();
    rec.source_path = j["source_path"].get<std::string>();
    rec.is_test_context = j["is_test_context"].get<bool>();
  } catch (const json::exception&) {
    return false;
  }
  return !rec.method_name.empty();
}

}  // namespace

std::string record_to_json_line(const MethodRecord& rec) {
  json j;
  j["class_name"] = rec.class_name;
  j["method_name"] = rec.method_name;
  j["return_type"] = rec.return_type;
  json params = json::array();
  for (const auto& [type, name] : rec.parameters) {
    params.push_back(json::array({type, name}));
  }
  j["parameters"] = params;
  j["body_tokens"] = rec.body_tokens;
  j["source_path"] = rec.source_path;
  j["is_test_context"] = rec.is_test_context;
  return j.dump();
}

std::vector<MethodRecord> read_jsonl(std::istream& in, CorpusReadSummary* summary) {
  std::vector<MethodRecord> out;
  std::string line;
  CorpusReadSummary local;
  CorpusReadSummary& sum = summary ? *summary : local;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++sum.lines;
    json j = json::parse(line, nullptr, false);
    MethodRecord rec;
    if (j.is_discarded() || !record_from_json(j, rec)) {
      ++sum.rejected;
      continue;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<MethodRecord> read_jsonl_file(const std::filesystem::path& path,
                                          CorpusReadSummary* summary) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());
  return read_jsonl(in, summary);
}

void write_jsonl(std::ostream& out, const std::vector<MethodRecord>& records) {
  for (const auto& rec : records) out << record_to_json_line(rec) << '\n';
}

void write_jsonl_file(const std::filesystem::path& path,
                      const std::vector<MethodRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  write_jsonl(out, records);
}

namespace {

const std::vector<std::string>& nouns() {
  static const std::vector<std::string> v = {
      "name",   "count",  "index",  "value",  "user",   "item",  "size",  "total",
      "flag",   "state",  "data",   "key",    "result", "buffer", "cache", "limit",
      "offset", "width",  "height", "color",  "label",  "title", "owner", "parent",
      "child",  "node",   "edge",   "score",  "rank",   "price", "amount", "level"};
  return v;
}

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v = {
      "compute", "update", "merge",  "find",   "build", "apply",  "reset",
      "sort",    "filter", "copy",   "append", "remove", "insert", "clear",
      "parse",   "render", "scan",   "emit"};
  return v;
}

std::string cap(const std::string& s) {
  std::string out = s;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

std::vector<MethodRecord> synth_corpus(size_t n, uint64_t seed) {
  Rng rng(seed);
  const auto& N = nouns();
  const auto& V = verbs();
  std::vector<MethodRecord> out;
  out.reserve(n);
  const std::vector<std::string> ret_types = {"int", "long", "String", "double"};
  for (size_t i = 0; i < n; ++i) {
    int cat = static_cast<int>(i % 5);
    const std::string& a = N[rng.below(N.size())];
    std::string b = N[rng.below(N.size())];
    while (b == a) b = N[rng.below(N.size())];
    bool two = rng.uniform() < 0.5;
    std::string field = two ? a + cap(b) : a;
    SubtokenSequence field_toks = split_identifier(field);

    MethodRecord rec;
    rec.source_path = "synthetic";
    switch (cat) {
      case 0: {  // GET
        rec.class_name = cap(a) + "Holder";
        rec.return_type = ret_types[rng.below(ret_types.size())];
        rec.body_tokens = {"return", field, ";"};
        rec.method_name = camel_join([&] {
          SubtokenSequence t{"get"};
          t.insert(t.end(), field_toks.begin(), field_toks.end());
          return t;
        }());
        break;
      }
      case 1: {  // SET
        rec.class_name = cap(a) + "Holder";
        rec.return_type = "void";
        rec.parameters = {{ret_types[rng.below(ret_types.size())], "value"}};
        rec.body_tokens = {"this", ".", field, "=", "value", ";"};
        rec.method_name = camel_join([&] {
          SubtokenSequence t{"set"};
          t.insert(t.end(), field_toks.begin(), field_toks.end());
          return t;
        }());
        break;
      }
      case 2: {  // IS
        rec.class_name = cap(a) + "Holder";
        rec.return_type = "boolean";
        rec.body_tokens = {"return", field, ";"};
        rec.method_name = camel_join([&] {
          SubtokenSequence t{"is"};
          t.insert(t.end(), field_toks.begin(), field_toks.end());
          return t;
        }());
        break;
      }
      case 3: {  // TEST
        const std::string& verb = V[rng.below(V.size())];
        std::string subject = verb + cap(a);
        rec.class_name = cap(b) + "Test";
        rec.return_type = "void";
        rec.is_test_context = true;
        rec.body_tokens = {subject, "(", ")", ";"};
        rec.method_name = camel_join([&] {
          SubtokenSequence t{"test"};
          for (auto& s : split_identifier(subject)) t.push_back(std::move(s));
          return t;
        }());
        break;
      }
      default: {  // OTHER
        const std::string& verb = V[rng.below(V.size())];
        SubtokenSequence name_toks{verb};
        name_toks.insert(name_toks.end(), field_toks.begin(), field_toks.end());
        std::string helper_call = camel_join(name_toks);
        rec.class_name = cap(b) + "Service";
        rec.return_type = rng.uniform() < 0.5 ? "void" : ret_types[rng.below(ret_types.size())];
        rec.body_tokens = {"helper", ".", helper_call, "(", field, ")", ";"};
        rec.method_name = helper_call;
        break;
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void render_java_project(const std::filesystem::path& root,
                         const std::vector<MethodRecord>& records,
                         size_t methods_per_file) {
  std::filesystem::create_directories(root);
  // group by class so a class lands in one file; split large classes
  std::map<std::string, std::vector<const MethodRecord*>> by_class;
  for (const auto& rec : records) by_class[rec.class_name].push_back(&rec);
  size_t file_no = 0;
  for (const auto& [cls, recs] : by_class) {
    for (size_t start = 0; start < recs.size(); start += methods_per_file) {
      std::ostringstream src;
      std::string cls_name = cls;
      if (start > 0) {
        // keep one class per file; spill methods into a sibling class with the
        // same naming suffix so gold class attribution stays meaningful
        cls_name = cls + std::to_string(start / methods_per_file);
        if (cls.ends_with("Test")) cls_name = cls.substr(0, cls.size() - 4) +
                                              std::to_string(start / methods_per_file) +
                                              "Test";
      }
      src << "public class " << cls_name << " {\n";
      size_t end = std::min(recs.size(), start + methods_per_file);
      for (size_t i = start; i < end; ++i) {
        const MethodRecord& r = *recs[i];
        src << "  public " << r.return_type << " " << r.method_name << "(";
        for (size_t p = 0; p < r.parameters.size(); ++p) {
          if (p) src << ", ";
          src << r.parameters[p].first << " " << r.parameters[p].second;
        }
        src << ") {";
        for (const auto& t : r.body_tokens) src << " " << t;
        src << " }\n";
      }
      src << "}\n";
      std::ofstream out(root / (cls_name + std::to_string(file_no) + ".java"));
      out << src.str();
      ++file_no;
    }
  }
}

}  // namespace mnr

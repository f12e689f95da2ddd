#include "mnr/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mnr/serialize.hpp"

namespace mnr {

const char* route_name(Route r) {
  switch (r) {
    case Route::Heuristic: return "HEURISTIC";
    case Route::Generator: return "GENERATOR";
    case Route::GeneratorForcedPrefix: return "GENERATOR_FORCED_PREFIX";
  }
  return "?";
}

namespace {

Candidate make_candidate(SubtokenSequence tokens, double score) {
  Candidate c;
  c.name = tokens.empty() ? std::string() : camel_join(tokens);
  c.subtokens = std::move(tokens);
  c.score = score;
  return c;
}

std::vector<Candidate> decode_candidates(const PipelineModel& pipe,
                                         const MethodRecord& record, int top_k,
                                         const std::optional<std::string>& forced) {
  std::vector<Candidate> out;
  for (const DecodedName& d :
       beam_decode(pipe.generator, record, pipe.config.decode, forced)) {
    if (static_cast<int>(out.size()) >= top_k) break;
    out.push_back(make_candidate(d.tokens, std::exp(d.score)));
  }
  if (out.empty()) out.push_back(make_candidate({"unk"}, 0.0));
  return out;
}

}  // namespace

Recommendation recommend(const PipelineModel& pipeline, const MethodRecord& record,
                         int top_k) {
  if (top_k < 1) throw std::invalid_argument("recommend: top_k must be >= 1");
  auto [category, confidence] = classify(pipeline.classifier, record);
  Recommendation rec;
  rec.category = category;
  rec.confidence = confidence;
  if (category != PrefixCategory::Other) {
    HeuristicOutcome outcome = apply_heuristic(record, category);
    if (!outcome.abstained()) {
      rec.route = Route::Heuristic;
      rec.candidates.push_back(make_candidate(*outcome.name_tokens, 1.0));
      return rec;
    }
    rec.route = Route::GeneratorForcedPrefix;
    std::string prefix = category_token(category);
    if (pipeline.has_generator) {
      rec.candidates = decode_candidates(pipeline, record, top_k, prefix);
    } else {
      rec.candidates.push_back(make_candidate({prefix}, 0.0));
    }
    return rec;
  }
  rec.route = Route::Generator;
  if (pipeline.has_generator) {
    rec.candidates = decode_candidates(pipeline, record, top_k, std::nullopt);
  } else {
    rec.candidates.push_back(make_candidate({"unk"}, 0.0));
  }
  return rec;
}

namespace {

void quantize_lstm(LstmParams& p) {
  for (auto* m : p.weight_list()) quantize_to_f32(*m);
  for (auto* v : p.bias_list()) quantize_to_f32(*v);
}

std::string config_blob(const PipelineModel& m) {
  std::ostringstream os;
  char buf[64];
  auto put_f = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << key << "=" << buf << "\n";
  };
  os << "classifier_d=" << m.config.classifier.d << "\n";
  os << "hash_space=" << m.config.classifier.hash_space << "\n";
  os << "classifier_epochs=" << m.config.classifier.epochs << "\n";
  put_f("classifier_lr", m.config.classifier.learning_rate);
  os << "classifier_seed=" << m.config.classifier.seed << "\n";
  os << "gen_embed_dim=" << m.config.generator.embed_dim << "\n";
  os << "gen_hidden_dim=" << m.config.generator.hidden_dim << "\n";
  os << "gen_epochs=" << m.config.generator.epochs << "\n";
  put_f("gen_lr", m.config.generator.learning_rate);
  put_f("clip_norm", m.config.generator.clip_norm);
  os << "gen_seed=" << m.config.generator.seed << "\n";
  os << "max_context_len=" << m.config.generator.max_context_len << "\n";
  os << "name_min_count=" << m.config.generator.vocab_min_count << "\n";
  os << "context_min_count=" << m.config.generator.context_min_count << "\n";
  os << "beam_width=" << m.config.decode.beam_width << "\n";
  os << "max_len=" << m.config.decode.max_len << "\n";
  put_f("length_penalty", m.config.decode.length_penalty);
  os << "has_generator=" << (m.has_generator ? 1 : 0) << "\n";
  return os.str();
}

std::map<std::string, std::string> parse_kv(const std::string& blob) {
  std::map<std::string, std::string> kv;
  std::istringstream is(blob);
  std::string line;
  while (std::getline(is, line)) {
    auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

const std::vector<std::string>& generator_tensor_names() {
  static const std::vector<std::string> names = {
      "gen.context_embed", "gen.name_embed",
      "gen.gamma_c.W_i",   "gen.gamma_c.W_f", "gen.gamma_c.W_o", "gen.gamma_c.W_g",
      "gen.gamma_c.U_i",   "gen.gamma_c.U_f", "gen.gamma_c.U_o", "gen.gamma_c.U_g",
      "gen.gamma_c.b_i",   "gen.gamma_c.b_f", "gen.gamma_c.b_o", "gen.gamma_c.b_g",
      "gen.gamma_p.W_i",   "gen.gamma_p.W_f", "gen.gamma_p.W_o", "gen.gamma_p.W_g",
      "gen.gamma_p.U_i",   "gen.gamma_p.U_f", "gen.gamma_p.U_o", "gen.gamma_p.U_g",
      "gen.gamma_p.b_i",   "gen.gamma_p.b_f", "gen.gamma_p.b_o", "gen.gamma_p.b_g",
      "gen.out_proj",      "gen.out_bias"};
  return names;
}

std::vector<const Eigen::MatrixXd*> lstm_matrices(const LstmParams& p) {
  return {&p.W_i, &p.W_f, &p.W_o, &p.W_g, &p.U_i, &p.U_f, &p.U_o, &p.U_g};
}

}  // namespace

PipelineModel train_pipeline(const std::vector<MethodRecord>& corpus,
                             const PipelineConfig& config,
                             std::vector<std::string>* warnings) {
  if (corpus.empty()) throw std::invalid_argument("train_pipeline: empty corpus");
  std::vector<PrefixCategory> labels;
  labels.reserve(corpus.size());
  std::vector<MethodRecord> others;
  for (const auto& rec : corpus) {
    PrefixCategory cat = derive_label(split_identifier(rec.method_name));
    labels.push_back(cat);
    if (cat == PrefixCategory::Other) others.push_back(rec);
  }

  PipelineModel model;
  model.config = config;
  model.classifier = train_classifier(corpus, labels, config.classifier).model;

  if (others.empty()) {
    if (warnings) {
      warnings->push_back(
          "no OTHER-category records: generator skipped, running in degraded mode");
    }
    model.has_generator = false;
    // vocabularies still ship with the model so the format stays uniform
    model.generator.vocab_c =
        Vocabulary::build(corpus, config.generator.context_min_count, VocabRole::Context);
    model.generator.vocab_n =
        Vocabulary::build(corpus, config.generator.vocab_min_count, VocabRole::Name);
    model.generator.seed = config.generator.seed;
    model.generator.max_context_len = config.generator.max_context_len;
  } else {
    model.generator = train_generator(others, config.generator).model;
    model.has_generator = true;
  }

  quantize_to_f32(model.classifier.A);
  quantize_to_f32(model.classifier.B);
  quantize_to_f32(model.classifier.bias);
  if (model.has_generator) {
    quantize_to_f32(model.generator.context_embed);
    quantize_to_f32(model.generator.name_embed);
    quantize_lstm(model.generator.gamma_c);
    quantize_lstm(model.generator.gamma_p);
    quantize_to_f32(model.generator.out_proj);
    quantize_to_f32(model.generator.out_bias);
  }
  return model;
}

void save_model(const PipelineModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  write_model_header(out);
  write_blob_section(out, "vocab.context", m.generator.vocab_c.to_text());
  write_blob_section(out, "vocab.name", m.generator.vocab_n.to_text());
  write_matrix_section(out, "clf.A", m.classifier.A);
  write_matrix_section(out, "clf.B", m.classifier.B);
  write_matrix_section(out, "clf.bias", m.classifier.bias);

  std::vector<const Eigen::MatrixXd*> gc = lstm_matrices(m.generator.gamma_c);
  std::vector<const Eigen::MatrixXd*> gp = lstm_matrices(m.generator.gamma_p);
  const auto& names = generator_tensor_names();
  size_t ni = 0;
  write_matrix_section(out, names[ni++], m.generator.context_embed);
  write_matrix_section(out, names[ni++], m.generator.name_embed);
  for (const auto* w : gc) write_matrix_section(out, names[ni++], *w);
  for (const auto* b : m.generator.gamma_c.bias_list())
    write_matrix_section(out, names[ni++], *b);
  for (const auto* w : gp) write_matrix_section(out, names[ni++], *w);
  for (const auto* b : m.generator.gamma_p.bias_list())
    write_matrix_section(out, names[ni++], *b);
  write_matrix_section(out, names[ni++], m.generator.out_proj);
  write_matrix_section(out, names[ni++], m.generator.out_bias);
  write_blob_section(out, "config", config_blob(m));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

PipelineModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  read_model_header(in);
  PipelineModel m;
  m.generator.vocab_c = Vocabulary::from_text(read_blob_section(in, "vocab.context"));
  m.generator.vocab_n = Vocabulary::from_text(read_blob_section(in, "vocab.name"));

  // tensors buffer until the config section supplies the shapes
  std::vector<float> clf_a = read_f32_section(in, "clf.A");
  std::vector<float> clf_b = read_f32_section(in, "clf.B");
  std::vector<float> clf_bias = read_f32_section(in, "clf.bias");
  std::map<std::string, std::vector<float>> gen;
  for (const auto& name : generator_tensor_names()) {
    gen[name] = read_f32_section(in, name);
  }
  auto kv = parse_kv(read_blob_section(in, "config"));
  auto geti = [&](const char* k) { return std::stoll(kv.at(k)); };
  auto getf = [&](const char* k) { return std::stod(kv.at(k)); };
  m.config.classifier.d = static_cast<int>(geti("classifier_d"));
  m.config.classifier.hash_space = static_cast<uint32_t>(geti("hash_space"));
  m.config.classifier.epochs = static_cast<int>(geti("classifier_epochs"));
  m.config.classifier.learning_rate = getf("classifier_lr");
  m.config.classifier.seed = static_cast<uint64_t>(geti("classifier_seed"));
  m.config.generator.embed_dim = static_cast<int>(geti("gen_embed_dim"));
  m.config.generator.hidden_dim = static_cast<int>(geti("gen_hidden_dim"));
  m.config.generator.epochs = static_cast<int>(geti("gen_epochs"));
  m.config.generator.learning_rate = getf("gen_lr");
  m.config.generator.clip_norm = getf("clip_norm");
  m.config.generator.seed = static_cast<uint64_t>(geti("gen_seed"));
  m.config.generator.max_context_len = static_cast<size_t>(geti("max_context_len"));
  m.config.generator.vocab_min_count = static_cast<int>(geti("name_min_count"));
  m.config.generator.context_min_count = static_cast<int>(geti("context_min_count"));
  m.config.decode.beam_width = static_cast<int>(geti("beam_width"));
  m.config.decode.max_len = static_cast<int>(geti("max_len"));
  m.config.decode.length_penalty = getf("length_penalty");
  m.has_generator = geti("has_generator") != 0;

  auto reshape = [](auto& mat, const std::vector<float>& buf, Eigen::Index rows,
                    Eigen::Index cols) {
    if (static_cast<Eigen::Index>(buf.size()) != rows * cols) {
      throw std::runtime_error("model file: tensor size mismatch");
    }
    mat.resize(rows, cols);
    size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) mat(r, c) = buf[k++];
    }
  };

  const int d = m.config.classifier.d;
  const auto H = static_cast<Eigen::Index>(m.config.classifier.hash_space);
  reshape(m.classifier.A, clf_a, H, d);
  reshape(m.classifier.B, clf_b, d, kNumCategories);
  reshape(m.classifier.bias, clf_bias, kNumCategories, 1);
  m.classifier.d = d;
  m.classifier.hash_space = m.config.classifier.hash_space;
  m.classifier.rng_seed = m.config.classifier.seed;

  m.generator.seed = m.config.generator.seed;
  m.generator.max_context_len = m.config.generator.max_context_len;
  if (m.has_generator) {
    const int d_e = m.config.generator.embed_dim;
    const int d_h = m.config.generator.hidden_dim;
    const Eigen::Index vc = m.generator.vocab_c.size();
    const Eigen::Index vn = m.generator.vocab_n.size();
    reshape(m.generator.context_embed, gen.at("gen.context_embed"), vc, d_e);
    reshape(m.generator.name_embed, gen.at("gen.name_embed"), vn, d_e);
    auto load_lstm = [&](LstmParams& p, const std::string& prefix) {
      p = LstmParams::zeros(d_e, d_h);
      auto ws = p.weight_list();
      static const char* wn[] = {"W_i", "W_f", "W_o", "W_g", "U_i", "U_f", "U_o", "U_g"};
      for (size_t i = 0; i < ws.size(); ++i) {
        Eigen::Index cols = i < 4 ? d_e : d_h;
        reshape(*ws[i], gen.at(prefix + wn[i]), d_h, cols);
      }
      auto bs = p.bias_list();
      static const char* bn[] = {"b_i", "b_f", "b_o", "b_g"};
      for (size_t i = 0; i < bs.size(); ++i) {
        reshape(*bs[i], gen.at(prefix + bn[i]), d_h, 1);
      }
    };
    load_lstm(m.generator.gamma_c, "gen.gamma_c.");
    load_lstm(m.generator.gamma_p, "gen.gamma_p.");
    reshape(m.generator.out_proj, gen.at("gen.out_proj"), 2 * d_h, vn);
    reshape(m.generator.out_bias, gen.at("gen.out_bias"), vn, 1);
  }
  return m;
}

}  // namespace mnr

#include "mnr/extractor.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "mnr/lexer.hpp"

namespace mnr {

namespace {

const std::unordered_set<std::string_view> kModifiers = {
    "public", "private",      "protected", "static",   "final",  "abstract",
    "native", "synchronized", "strictfp",  "default",  "transient", "volatile"};

const std::unordered_set<std::string_view> kPrimitiveish = {
    "void", "int", "long", "short", "byte", "char", "float", "double", "boolean", "var"};

struct TypeContext {
  std::string name;
  int body_depth = 0;      // brace depth just inside the type body
  bool is_annotation = false;  // @interface bodies are not scanned for methods
};

class MemberScanner {
 public:
  MemberScanner(const std::vector<JavaToken>& tokens, std::string source_path,
                std::vector<std::string>* diagnostics)
      : toks_(tokens), path_(std::move(source_path)), diags_(diagnostics) {}

  std::vector<MethodRecord> run() {
    while (i_ < toks_.size()) {
      const JavaToken& t = toks_[i_];
      if (t.kind == TokenKind::Keyword &&
          (t.text == "class" || t.text == "interface" || t.text == "enum" ||
           t.text == "record") &&
          i_ + 1 < toks_.size() && toks_[i_ + 1].kind == TokenKind::Identifier) {
        pending_ = TypeContext{toks_[i_ + 1].text, 0, false};
        i_ += 2;
        continue;
      }
      if (t.kind == TokenKind::Annotation && t.text == "@interface" &&
          i_ + 1 < toks_.size() && toks_[i_ + 1].kind == TokenKind::Identifier) {
        pending_ = TypeContext{toks_[i_ + 1].text, 0, true};
        i_ += 2;
        continue;
      }
      if (is_punct(t, '{')) {
        ++depth_;
        if (pending_) {
          pending_->body_depth = depth_;
          stack_.push_back(*pending_);
          pending_.reset();
        }
        ++i_;
        continue;
      }
      if (is_punct(t, '}')) {
        if (!stack_.empty() && stack_.back().body_depth == depth_) stack_.pop_back();
        if (depth_ > 0) --depth_;
        ++i_;
        continue;
      }
      if (!stack_.empty() && depth_ == stack_.back().body_depth &&
          !stack_.back().is_annotation) {
        parse_member();
        continue;
      }
      ++i_;
    }
    if (depth_ != 0) diag("unbalanced braces at end of file");
    return std::move(records_);
  }

 private:
  static bool is_punct(const JavaToken& t, char c) {
    return t.kind == TokenKind::Punctuation && t.text.size() == 1 && t.text[0] == c;
  }
  bool at(size_t j, const char* text) const {
    return j < toks_.size() && toks_[j].text == text;
  }

  void diag(const std::string& msg) {
    if (diags_) diags_->push_back(path_ + ": " + msg);
  }

  // Skips a balanced <...> starting at an opening "<". ">>" and ">>>" close
  // two and three levels. Returns false when the scan hits a statement
  // boundary instead of closing.
  bool skip_angles(size_t& j) {
    int open = 0;
    while (j < toks_.size()) {
      const std::string& s = toks_[j].text;
      if (s == "<") {
        ++open;
      } else if (s == ">") {
        --open;
      } else if (s == ">>") {
        open -= 2;
      } else if (s == ">>>") {
        open -= 3;
      } else if (s == ";" || s == "{" || s == ")") {
        return false;
      }
      ++j;
      if (open <= 0) return open == 0;
    }
    return false;
  }

  // Advances past the current statement: stops after a ';' at nesting level 0,
  // or before a '}' that would close the enclosing type body.
  void skip_statement() {
    int bal = 0;
    while (i_ < toks_.size()) {
      const std::string& s = toks_[i_].text;
      if (s == "(" || s == "[" || s == "{") ++bal;
      if (s == ")" || s == "]") --bal;
      if (s == "}") {
        if (bal == 0) return;  // closes the type body; main loop handles it
        --bal;
      }
      if (s == ";" && bal == 0) {
        ++i_;
        return;
      }
      ++i_;
    }
  }

  // Parses a type starting at j: (identifier|primitive) ('.' ident | <...> | [])*.
  // On success appends the flattened source text to out and advances j.
  bool parse_type(size_t& j, std::string& out) {
    if (j >= toks_.size()) return false;
    const JavaToken& first = toks_[j];
    bool ok = first.kind == TokenKind::Identifier ||
              (first.kind == TokenKind::Keyword && kPrimitiveish.count(first.text));
    if (!ok) return false;
    out += first.text;
    ++j;
    while (j < toks_.size()) {
      const std::string& s = toks_[j].text;
      if (s == "." && j + 1 < toks_.size() && toks_[j + 1].kind == TokenKind::Identifier) {
        out += ".";
        out += toks_[j + 1].text;
        j += 2;
      } else if (s == "<") {
        size_t k = j;
        size_t before = k;
        if (!skip_angles(k)) break;
        for (size_t m = before; m < k; ++m) out += toks_[m].text;
        j = k;
      } else if (s == "[" && at(j + 1, "]")) {
        out += "[]";
        j += 2;
      } else {
        break;
      }
    }
    return true;
  }

  // Finds the ')' matching the '(' at j (which must be an open paren) and
  // returns the index past it, or npos on EOF.
  size_t match_parens(size_t j) {
    int bal = 0;
    while (j < toks_.size()) {
      const std::string& s = toks_[j].text;
      if (s == "(") ++bal;
      if (s == ")") {
        --bal;
        if (bal == 0) return j + 1;
      }
      ++j;
    }
    return std::string::npos;
  }

  std::vector<std::pair<std::string, std::string>> parse_params(size_t lparen,
                                                                size_t rparen_end) {
    std::vector<std::pair<std::string, std::string>> params;
    // tokens strictly inside the parens
    size_t lo = lparen + 1, hi = rparen_end - 1;
    std::vector<std::pair<size_t, size_t>> groups;
    size_t start = lo;
    int bal = 0;
    for (size_t j = lo; j < hi; ++j) {
      const std::string& s = toks_[j].text;
      if (s == "(" || s == "[" || s == "<") ++bal;
      if (s == ")" || s == "]" || s == ">") --bal;
      if (s == ">>") bal -= 2;
      if (s == ">>>") bal -= 3;
      if (s == "," && bal == 0) {
        groups.emplace_back(start, j);
        start = j + 1;
      }
    }
    if (start < hi) groups.emplace_back(start, hi);
    for (auto [a, b] : groups) {
      // drop annotations and 'final'
      while (a < b && (toks_[a].kind == TokenKind::Annotation || toks_[a].text == "final")) ++a;
      if (a >= b) continue;
      // the parameter name is the last identifier in the group
      size_t name_idx = std::string::npos;
      for (size_t j = b; j-- > a;) {
        if (toks_[j].kind == TokenKind::Identifier) {
          name_idx = j;
          break;
        }
      }
      if (name_idx == std::string::npos || name_idx == a) continue;
      std::string type_text;
      for (size_t j = a; j < b; ++j) {
        if (j == name_idx) continue;
        type_text += toks_[j].text;
      }
      params.emplace_back(std::move(type_text), toks_[name_idx].text);
    }
    return params;
  }

  void parse_member() {
    size_t start = i_;
    size_t j = i_;
    std::vector<std::string> annotations;
    while (j < toks_.size()) {
      if (toks_[j].kind == TokenKind::Annotation) {
        annotations.push_back(toks_[j].text);
        // annotation arguments: @Test(timeout = 5)
        if (at(j + 1, "(")) {
          size_t past = match_parens(j + 1);
          if (past == std::string::npos) break;
          j = past;
        } else {
          ++j;
        }
        continue;
      }
      if (toks_[j].kind == TokenKind::Keyword && kModifiers.count(toks_[j].text)) {
        ++j;
        continue;
      }
      break;
    }
    if (j < toks_.size() && toks_[j].text == "<") {
      if (!skip_angles(j)) {
        skip_statement();
        return;
      }
    }
    // nested type declarations re-enter the main loop
    if (j < toks_.size() && toks_[j].kind == TokenKind::Keyword &&
        (toks_[j].text == "class" || toks_[j].text == "interface" ||
         toks_[j].text == "enum" || toks_[j].text == "record")) {
      i_ = j;
      advance_past_type_keyword();
      return;
    }
    std::string return_type;
    if (!parse_type(j, return_type)) {
      (void)start;
      skip_statement();
      return;
    }
    if (j < toks_.size() && toks_[j].text == "(") {
      // constructor: no return type, name was parsed as the type
      skip_callable(j, /*capture=*/false, "", return_type, annotations);
      return;
    }
    if (j + 1 < toks_.size() && toks_[j].kind == TokenKind::Identifier &&
        toks_[j + 1].text == "(") {
      std::string name = toks_[j].text;
      skip_callable(j + 1, /*capture=*/true, name, return_type, annotations);
      return;
    }
    // field declaration or something else
    i_ = j;
    skip_statement();
  }

  void advance_past_type_keyword() {
    // delegate back to run(): the class/interface branch there will fire
    // (i_ already points at the keyword)
    const JavaToken& t = toks_[i_];
    if (i_ + 1 < toks_.size() && toks_[i_ + 1].kind == TokenKind::Identifier) {
      pending_ = TypeContext{toks_[i_ + 1].text, 0, false};
      i_ += 2;
    } else {
      ++i_;
    }
    (void)t;
  }

  void skip_callable(size_t lparen, bool capture, const std::string& name,
                     const std::string& return_type,
                     const std::vector<std::string>& annotations) {
    size_t after = match_parens(lparen);
    if (after == std::string::npos) {
      i_ = toks_.size();
      diag("unbalanced parentheses at end of file");
      return;
    }
    // skip 'throws X, Y' and legacy '[]' up to the body or ';'
    size_t j = after;
    while (j < toks_.size() && toks_[j].text != "{" && toks_[j].text != ";") ++j;
    if (j >= toks_.size()) {
      i_ = toks_.size();
      return;
    }
    if (toks_[j].text == ";") {
      i_ = j + 1;  // abstract/native, no body
      return;
    }
    // capture body tokens between balanced braces, excluding the braces
    size_t body_start = j + 1;
    int bal = 1;
    size_t k = body_start;
    while (k < toks_.size() && bal > 0) {
      const std::string& s = toks_[k].text;
      if (s == "{") ++bal;
      if (s == "}") --bal;
      if (bal > 0) ++k;
    }
    if (bal != 0) {
      diag("unbalanced braces at end of file (open method body dropped)");
      i_ = toks_.size();
      return;
    }
    if (capture) {
      MethodRecord rec;
      rec.class_name = stack_.back().name;
      rec.method_name = name;
      rec.return_type = return_type;
      rec.parameters = parse_params(lparen, after);
      rec.body_tokens.reserve(k - body_start);
      for (size_t m = body_start; m < k; ++m) rec.body_tokens.push_back(toks_[m].text);
      rec.source_path = path_;
      const std::string& cls = stack_.back().name;
      bool test_class = cls.ends_with("Test") || cls.ends_with("Tests");
      bool test_annot = std::find(annotations.begin(), annotations.end(), "@Test") !=
                        annotations.end();
      rec.is_test_context = test_class || test_annot;
      records_.push_back(std::move(rec));
    }
    i_ = k + 1;  // past closing '}'
  }

  const std::vector<JavaToken>& toks_;
  std::string path_;
  std::vector<std::string>* diags_;
  size_t i_ = 0;
  int depth_ = 0;
  std::vector<TypeContext> stack_;
  std::optional<TypeContext> pending_;
  std::vector<MethodRecord> records_;
};

}  // namespace

std::vector<MethodRecord> extract_methods(const std::vector<JavaToken>& tokens,
                                          const std::string& source_path,
                                          std::vector<std::string>* diagnostics) {
  MemberScanner scanner(tokens, source_path, diagnostics);
  return scanner.run();
}

std::vector<MethodRecord> mine_corpus(const std::filesystem::path& root,
                                      MineSummary* summary) {
  MineSummary local;
  MineSummary& sum = summary ? *summary : local;
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (std::filesystem::recursive_directory_iterator it(root, ec), end; it != end;
       it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file(ec) && it->path().extension() == ".java") {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.string() < b.string(); });

  std::vector<MethodRecord> out;
  for (const auto& f : files) {
    ++sum.files_seen;
    std::ifstream in(f, std::ios::binary);
    if (!in) {
      ++sum.files_skipped;
      sum.diagnostics.push_back(f.string() + ": unreadable, skipped");
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    LexResult lexed = lex_java(buf.str());
    if (lexed.error) {
      ++sum.files_skipped;
      sum.diagnostics.push_back(f.string() + ": " + *lexed.error + ", skipped");
      continue;
    }
    auto recs = extract_methods(lexed.tokens, f.string(), &sum.diagnostics);
    sum.methods_mined += recs.size();
    out.insert(out.end(), std::make_move_iterator(recs.begin()),
               std::make_move_iterator(recs.end()));
  }
  return out;
}

}  // namespace mnr

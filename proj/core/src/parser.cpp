#include "nilsat/parser.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace nilsat {

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c, const char* what) {
    skip_space();
    if (peek() != c) fail(std::string("expected ") + what);
    advance();
  }

  // A run of non-space, non-paren characters.
  std::string_view atom() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') break;
      advance();
    }
    if (start == pos_) fail("expected an atom");
    return text_.substr(start, pos_ - start);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, column_, what);
  }

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

constexpr int kMaxVarIndex = 1 << 20;

class Parser {
 public:
  Parser(std::string_view text, const AlgebraSpec& spec)
      : lex_(text), spec_(spec) {}

  struct Result {
    std::vector<CNode> nodes;
    int output;
    int max_var;
  };

  Result run() {
    int out = parse_term();
    lex_.skip_space();
    if (!lex_.at_end()) lex_.fail("trailing input after term");
    return {std::move(nodes_), out, max_var_};
  }

 private:
  int parse_term() {
    lex_.expect('(', "'('");
    std::string_view head = lex_.atom();
    int result;
    if (head == "var") {
      int idx = parse_int("variable index");
      if (idx < 0) lex_.fail("negative variable index");
      if (idx > kMaxVarIndex) lex_.fail("variable index overflow");
      max_var_ = std::max(max_var_, idx);
      result = push({NodeKind::Var, idx, {}, 0, -1, -1});
    } else if (head == "const") {
      std::string_view lit = lex_.atom();
      DElem value;
      try {
        value = spec_.parse_literal(lit);
      } catch (const std::invalid_argument& err) {
        lex_.fail(err.what());
      }
      result = push({NodeKind::Const, -1, value, 0, -1, -1});
    } else if (head == "+") {
      int acc = parse_term();
      int count = 1;
      while (true) {
        lex_.skip_space();
        if (lex_.peek() == ')') break;
        int next = parse_term();
        acc = push({NodeKind::Add, -1, {}, 0, acc, next});
        ++count;
      }
      if (count < 2) lex_.fail("'+' needs at least two arguments");
      result = acc;
    } else if (head == "-") {
      int child = parse_term();
      result = push({NodeKind::Neg, -1, {}, 0, child, -1});
    } else if (head == "e" || head == "v") {
      int level = parse_int("level");
      int hi = head == "e" ? spec_.height() : spec_.height() - 1;
      if (level < 1 || level > hi) lex_.fail("level out of range");
      int child = parse_term();
      result = push({head == "e" ? NodeKind::E : NodeKind::V, -1, {}, level, child, -1});
    } else {
      lex_.fail("unknown operator '" + std::string(head) + "'");
    }
    lex_.expect(')', "')'");
    return result;
  }

  int parse_int(const char* what) {
    std::string_view a = lex_.atom();
    int value = 0;
    auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), value);
    if (ec == std::errc::result_out_of_range) lex_.fail(std::string(what) + " overflow");
    if (ec != std::errc() || ptr != a.data() + a.size())
      lex_.fail(std::string("malformed ") + what);
    return value;
  }

  int push(CNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  Lexer lex_;
  const AlgebraSpec& spec_;
  std::vector<CNode> nodes_;
  int max_var_ = -1;
};

}  // namespace

Circuit parse_circuit(std::string_view text, const AlgebraSpec& spec, int arity) {
  Parser parser(text, spec);
  auto result = parser.run();
  int declared = arity >= 0 ? arity : result.max_var + 1;
  if (result.max_var >= declared)
    throw ParseError(1, 1, "variable index " + std::to_string(result.max_var) +
                               " exceeds declared arity " + std::to_string(declared));
  return Circuit(spec, std::move(result.nodes), result.output, declared);
}

}  // namespace nilsat

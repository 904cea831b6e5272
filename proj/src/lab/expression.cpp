#include "kahlerlab/lab/expression.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

namespace kahlerlab::lab {

namespace {

using Node = std::function<double(const CVec&)>;

class Parser {
 public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  Node parse() {
    Node e = sum();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::ConfigError, "expression column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node sum() {
    Node lhs = product();
    for (;;) {
      if (eat('+')) {
        Node r = product();
        lhs = [lhs, r](const CVec& z) { return lhs(z) + r(z); };
      } else if (eat('-')) {
        Node r = product();
        lhs = [lhs, r](const CVec& z) { return lhs(z) - r(z); };
      } else {
        return lhs;
      }
    }
  }

  Node product() {
    Node lhs = unary();
    for (;;) {
      if (eat('*')) {
        Node r = unary();
        lhs = [lhs, r](const CVec& z) { return lhs(z) * r(z); };
      } else if (eat('/')) {
        Node r = unary();
        lhs = [lhs, r](const CVec& z) { return lhs(z) / r(z); };
      } else {
        return lhs;
      }
    }
  }

  Node unary() {
    if (eat('-')) {
      Node e = unary();
      return [e](const CVec& z) { return -e(z); };
    }
    if (eat('+')) return unary();
    return power();
  }

  // Right associative; binds tighter than unary minus on its left operand.
  Node power() {
    Node base = atom();
    if (eat('^')) {
      Node ex = unary();
      return [base, ex](const CVec& z) { return std::pow(base(z), ex(z)); };
    }
    return base;
  }

  Node atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of expression");
    if (eat('(')) {
      Node e = sum();
      if (!eat(')')) error("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) error("bad number");
      pos_ += static_cast<size_t>(end - begin);
      return [v](const CVec&) { return v; };
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) error("unexpected '" + std::string(1, c) + "'");
    const size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "pi") return [](const CVec&) { return std::numbers::pi; };
    if (name == "r2") return [](const CVec& z) { return z.squaredNorm(); };
    if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1 &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int k = std::stoi(name.substr(1)) - 1;
      if (k < 0 || k >= n_) {
        pos_ = start;
        error("variable " + name + " out of range for n = " + std::to_string(n_));
      }
      if (name[0] == 'x') return [k](const CVec& z) { return z[k].real(); };
      return [k](const CVec& z) { return z[k].imag(); };
    }
    static const std::map<std::string, double (*)(double)> fns = {
        {"sqrt", [](double x) { return std::sqrt(x); }},   {"exp", [](double x) { return std::exp(x); }},
        {"log", [](double x) { return std::log(x); }},     {"log1p", [](double x) { return std::log1p(x); }},
        {"sin", [](double x) { return std::sin(x); }},     {"cos", [](double x) { return std::cos(x); }},
        {"tan", [](double x) { return std::tan(x); }},     {"sinh", [](double x) { return std::sinh(x); }},
        {"cosh", [](double x) { return std::cosh(x); }},   {"tanh", [](double x) { return std::tanh(x); }},
        {"atan", [](double x) { return std::atan(x); }},   {"abs", [](double x) { return std::abs(x); }},
    };
    const auto it = fns.find(name);
    if (it == fns.end()) {
      pos_ = start;
      error("unknown identifier '" + name + "'");
    }
    if (!eat('(')) error("expected '(' after " + name);
    Node arg = sum();
    if (!eat(')')) error("expected ')'");
    auto f = it->second;
    return [f, arg](const CVec& z) { return f(arg(z)); };
  }

  const std::string& s_;
  int n_;
  size_t pos_ = 0;
};

}  // namespace

std::function<double(const CVec&)> compile_expression(const std::string& text, int n) {
  if (n < 1) fail(ErrorKind::ConfigError, "expression dimension must be positive");
  Parser p(text, n);
  return p.parse();
}

}  // namespace kahlerlab::lab

#include "basespace/expr.hpp"

#include <cctype>
#include <vector>

#include "basespace/space.hpp"

namespace basespace {

struct Expr::Node {
  enum class Kind { Number, Var, Unary, Binary, Call } kind;
  Rational value;
  std::string name;  // variable or function name, or operator spelling
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    auto n = comparison();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("expression '" + std::string(s_) + "' at position " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  static NodePtr make(Kind k, std::string name, std::vector<NodePtr> args, Rational v = 0) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->name = std::move(name);
    n->args = std::move(args);
    n->value = std::move(v);
    return n;
  }

  NodePtr comparison() {
    auto lhs = sum();
    for (const char* op : {"<=", ">=", "<", ">"})
      if (eat(op)) return make(Kind::Binary, op, {lhs, sum()});
    return lhs;
  }

  NodePtr sum() {
    auto lhs = product();
    for (;;) {
      if (eat("+")) lhs = make(Kind::Binary, "+", {lhs, product()});
      else if (eat("-")) lhs = make(Kind::Binary, "-", {lhs, product()});
      else return lhs;
    }
  }

  NodePtr product() {
    auto lhs = unary();
    for (;;) {
      if (eat("*")) lhs = make(Kind::Binary, "*", {lhs, unary()});
      else if (eat("/")) lhs = make(Kind::Binary, "/", {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (eat("-")) return make(Kind::Unary, "-", {unary()});
    return power();
  }

  NodePtr power() {
    auto base = atom();
    if (eat("^")) return make(Kind::Binary, "^", {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat("(")) {
      auto n = comparison();
      if (!eat(")")) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      // Exponent part, only when followed by a digit or sign and digit.
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t q = pos_ + 1;
        if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
        if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
          pos_ = q;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
      }
      try {
        return make(Kind::Number, "", {}, parse_rational(s_.substr(start, pos_ - start)));
      } catch (const std::invalid_argument&) {
        pos_ = start;
        fail("malformed number");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (!eat("(")) return make(Kind::Var, name, {});
      std::vector<NodePtr> args;
      if (!eat(")")) {
        do args.push_back(comparison());
        while (eat(","));
        if (!eat(")")) fail("expected ')' after arguments of " + name);
      }
      static const std::map<std::string, std::size_t> arity{{"exp", 1},  {"sqrt", 1}, {"abs", 1},    {"min", 2},
                                                             {"max", 2},  {"fact", 1}, {"dyadic", 1}, {"sum", 4}};
      auto it = arity.find(name);
      if (it == arity.end()) fail("unknown function '" + name + "'");
      if (it->second != args.size()) fail(name + " takes " + std::to_string(it->second) + " arguments");
      if (name == "sum" && args[0]->kind != Kind::Var) fail("sum needs an index variable first");
      return make(Kind::Call, name, std::move(args));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

long exact_integer(const Interval& v, const char* what) {
  if (!v.exact() || v.lo.get_den() != 1 || !v.lo.get_num().fits_slong_p())
    throw std::domain_error(std::string(what) + " must be an exact integer");
  return v.lo.get_num().get_si();
}

Interval eval_node(const Expr::Node& n, Env& env, unsigned bits) {
  switch (n.kind) {
    case Kind::Number:
      return Interval(n.value);
    case Kind::Var: {
      auto it = env.find(n.name);
      if (it == env.end()) throw InputError("unbound variable '" + n.name + "'");
      return it->second;
    }
    case Kind::Unary:
      return -eval_node(*n.args[0], env, bits);
    case Kind::Binary: {
      Interval a = eval_node(*n.args[0], env, bits);
      Interval b = eval_node(*n.args[1], env, bits);
      const std::string& op = n.name;
      if (op == "+") return a + b;
      if (op == "-") return a - b;
      if (op == "*") return a * b;
      if (op == "/") return a / b;
      if (op == "^") {
        long e = exact_integer(b, "exponent");
        Interval p = pow_int(a, static_cast<unsigned long>(e < 0 ? -e : e));
        return e < 0 ? Interval(Rational(1)) / p : p;
      }
      // Comparisons: decided when the enclosures separate.
      bool yes = false, no = false;
      if (op == "<") yes = a.hi < b.lo, no = a.lo >= b.hi;
      else if (op == "<=") yes = a.hi <= b.lo, no = a.lo > b.hi;
      else if (op == ">") yes = a.lo > b.hi, no = a.hi <= b.lo;
      else if (op == ">=") yes = a.lo >= b.hi, no = a.hi < b.lo;
      if (yes) return Interval(Rational(1));
      if (no) return Interval(Rational(0));
      return Interval(Rational(0), Rational(1));
    }
    case Kind::Call: {
      const std::string& f = n.name;
      if (f == "sum") {
        const std::string& var = n.args[0]->name;
        long from = exact_integer(eval_node(*n.args[1], env, bits), "sum bound");
        long to = exact_integer(eval_node(*n.args[2], env, bits), "sum bound");
        auto saved = env.find(var) != env.end() ? std::optional<Interval>(env[var]) : std::nullopt;
        Interval total(Rational(0));
        for (long i = from; i <= to; ++i) {
          env[var] = Interval(Rational(i));
          total = total + eval_node(*n.args[3], env, bits);
        }
        if (saved) env[var] = *saved;
        else env.erase(var);
        return total;
      }
      Interval a = eval_node(*n.args[0], env, bits);
      if (f == "exp") return exp(a, bits);
      if (f == "sqrt") return sqrt(a, bits);
      if (f == "abs") return abs(a);
      if (f == "min" || f == "max") {
        Interval b = eval_node(*n.args[1], env, bits);
        if (f == "min") return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
        return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
      }
      if (f == "fact") {
        long k = exact_integer(a, "fact argument");
        if (k < 0) throw std::domain_error("fact of a negative number");
        mpz_class r;
        mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
        return Interval(Rational(r));
      }
      if (f == "dyadic") {
        if (!a.exact()) return Interval(Rational(0), Rational(1));
        const mpz_class& d = a.lo.get_den();
        return Interval(Rational(mpz_popcount(d.get_mpz_t()) == 1 ? 1 : 0));
      }
      break;
    }
  }
  throw std::logic_error("unhandled expression node");
}

// Point evaluation in exact arithmetic. Empty when some part has no exact
// rational value (a transcendental call or an interval-valued variable).
std::optional<Rational> exact_node(const Expr::Node& n, const Env& env) {
  switch (n.kind) {
    case Kind::Number:
      return n.value;
    case Kind::Var: {
      auto it = env.find(n.name);
      if (it == env.end()) throw InputError("unbound variable '" + n.name + "'");
      if (!it->second.exact()) return std::nullopt;
      return it->second.lo;
    }
    case Kind::Unary: {
      auto a = exact_node(*n.args[0], env);
      if (a) *a = -*a;
      return a;
    }
    case Kind::Binary: {
      auto a = exact_node(*n.args[0], env);
      if (!a) return a;
      auto b = exact_node(*n.args[1], env);
      if (!b) return b;
      const std::string& op = n.name;
      if (op == "+") return *a + *b;
      if (op == "-") return *a - *b;
      if (op == "*") return *a * *b;
      if (op == "/") {
        if (*b == 0) throw std::domain_error("division by zero");
        return *a / *b;
      }
      if (op == "^") {
        long e = exact_integer(Interval(*b), "exponent");
        Rational p = pow_int(*a, static_cast<unsigned long>(e < 0 ? -e : e));
        if (e < 0 && p == 0) throw std::domain_error("division by zero");
        return e < 0 ? Rational(1 / p) : p;
      }
      bool yes = false;
      if (op == "<") yes = *a < *b;
      else if (op == "<=") yes = *a <= *b;
      else if (op == ">") yes = *a > *b;
      else if (op == ">=") yes = *a >= *b;
      return Rational(yes ? 1 : 0);
    }
    case Kind::Call: {
      const std::string& f = n.name;
      if (f == "abs" || f == "min" || f == "max" || f == "fact" || f == "dyadic") {
        auto a = exact_node(*n.args[0], env);
        if (!a) return a;
        if (f == "abs") return Rational(abs(*a));
        if (f == "min" || f == "max") {
          auto b = exact_node(*n.args[1], env);
          if (!b) return b;
          return f == "min" ? std::min(*a, *b) : std::max(*a, *b);
        }
        if (f == "dyadic") return Rational(mpz_popcount(a->get_den().get_mpz_t()) == 1 ? 1 : 0);
      }
      Env local = env;
      Interval v = eval_node(n, local, 64);
      if (!v.exact()) return std::nullopt;
      return v.lo;
    }
  }
  throw std::logic_error("unhandled expression node");
}

}  // namespace

Expr Expr::parse(std::string_view text) {
  Expr e;
  e.root_ = Parser(text).parse();
  e.text_ = std::string(text);
  return e;
}

Expr Expr::constant(const Rational& c) { return parse(format_rational(c)); }

Interval Expr::eval(const Env& env, unsigned bits) const {
  Env local = env;
  return eval_node(*root_, local, bits);
}

std::optional<Rational> Expr::eval_exact(const Env& env) const {
  if (auto x = exact_node(*root_, env)) return x;
  Interval v = eval(env, 64);
  if (!v.exact()) return std::nullopt;
  return v.lo;
}

Interval Expr::eval(std::string_view var, const Interval& x, unsigned bits) const {
  Env env;
  env.emplace(std::string(var), x);
  return eval(env, bits);
}

}  // namespace basespace

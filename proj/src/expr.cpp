#include "oscert/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "oscert/errors.hpp"

namespace oscert {

namespace {

enum Op {
  kPushNum,
  kPushX,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kNeg,
  kSin,
  kCos,
  kExp,
  kLog,
  kSqrt,
  kAbs,
  kStep,
};

int func_op(Expr::Func f) {
  switch (f) {
    case Expr::Func::Sin: return kSin;
    case Expr::Func::Cos: return kCos;
    case Expr::Func::Exp: return kExp;
    case Expr::Func::Log: return kLog;
    case Expr::Func::Sqrt: return kSqrt;
    case Expr::Func::Abs: return kAbs;
    case Expr::Func::Step: return kStep;
  }
  return kAbs;
}

const char* func_name(Expr::Func f) {
  switch (f) {
    case Expr::Func::Sin: return "sin";
    case Expr::Func::Cos: return "cos";
    case Expr::Func::Exp: return "exp";
    case Expr::Func::Log: return "log";
    case Expr::Func::Sqrt: return "sqrt";
    case Expr::Func::Abs: return "abs";
    case Expr::Func::Step: return "step";
  }
  return "?";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

struct Expr::Node {
  enum class Kind { Num, X, Param, Neg, Bin, Call } kind;
  double num = 0.0;      // Num and Param
  std::string name;      // Param
  char op = 0;           // Bin: one of + - * / ^
  Func fn = Func::Sin;   // Call
  NodePtr a, b;
};

Expr::Expr(NodePtr root) : root_(std::move(root)) { compile(); }

Expr Expr::number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Num;
  n->num = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::X;
  return Expr(std::move(n));
}

Expr Expr::parameter(std::string name, double value) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Param;
  n->name = std::move(name);
  n->num = value;
  return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Call;
  n->fn = f;
  n->a = std::move(arg.root_);
  return Expr(std::move(n));
}

Expr operator+(Expr a, Expr b) { return Expr::make_bin('+', std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::make_bin('-', std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::make_bin('*', std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::make_bin('/', std::move(a), std::move(b)); }

Expr Expr::pow(Expr base, Expr exponent) {
  return make_bin('^', std::move(base), std::move(exponent));
}

Expr operator-(Expr a) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Kind::Neg;
  n->a = std::move(a.root_);
  return Expr(std::move(n));
}

Expr Expr::make_bin(char op, Expr a, Expr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Node::Kind::Bin;
  n->op = op;
  n->a = std::move(a.root_);
  n->b = std::move(b.root_);
  return Expr(std::move(n));
}

void Expr::compile() {
  prog_.clear();
  stack_need_ = 0;
  uses_x_ = false;
  if (!root_) return;

  // Post-order walk without recursion depth limits.
  struct Frame {
    const Node* node;
    int stage;
  };
  std::vector<Frame> stack{{root_.get(), 0}};
  int depth = 0;
  auto emit = [&](int op, double imm, int delta) {
    prog_.push_back({op, imm});
    depth += delta;
    if (depth > stack_need_) stack_need_ = depth;
  };
  while (!stack.empty()) {
    Frame& fr = stack.back();
    const Node* n = fr.node;
    switch (n->kind) {
      case Node::Kind::Num:
        emit(kPushNum, n->num, +1);
        stack.pop_back();
        break;
      case Node::Kind::Param:
        emit(kPushNum, n->num, +1);
        stack.pop_back();
        break;
      case Node::Kind::X:
        emit(kPushX, 0.0, +1);
        uses_x_ = true;
        stack.pop_back();
        break;
      case Node::Kind::Neg:
        if (fr.stage == 0) {
          fr.stage = 1;
          stack.push_back({n->a.get(), 0});
        } else {
          emit(kNeg, 0.0, 0);
          stack.pop_back();
        }
        break;
      case Node::Kind::Call:
        if (fr.stage == 0) {
          fr.stage = 1;
          stack.push_back({n->a.get(), 0});
        } else {
          emit(func_op(n->fn), 0.0, 0);
          stack.pop_back();
        }
        break;
      case Node::Kind::Bin:
        if (fr.stage == 0) {
          fr.stage = 1;
          stack.push_back({n->a.get(), 0});
        } else if (fr.stage == 1) {
          fr.stage = 2;
          stack.push_back({n->b.get(), 0});
        } else {
          int op = n->op == '+'   ? kAdd
                   : n->op == '-' ? kSub
                   : n->op == '*' ? kMul
                   : n->op == '/' ? kDiv
                                  : kPow;
          emit(op, 0.0, -1);
          stack.pop_back();
        }
        break;
    }
  }
}

double Expr::operator()(double x) const {
  if (prog_.empty()) return 0.0;
  thread_local std::vector<double> scratch;
  if ((int)scratch.size() < stack_need_) scratch.resize(stack_need_);
  double* sp = scratch.data();
  int top = -1;
  for (const Ins& ins : prog_) {
    switch (ins.op) {
      case kPushNum: sp[++top] = ins.imm; break;
      case kPushX: sp[++top] = x; break;
      case kAdd: --top; sp[top] += sp[top + 1]; break;
      case kSub: --top; sp[top] -= sp[top + 1]; break;
      case kMul: --top; sp[top] *= sp[top + 1]; break;
      case kDiv: --top; sp[top] /= sp[top + 1]; break;
      case kPow: --top; sp[top] = std::pow(sp[top], sp[top + 1]); break;
      case kNeg: sp[top] = -sp[top]; break;
      case kSin: sp[top] = std::sin(sp[top]); break;
      case kCos: sp[top] = std::cos(sp[top]); break;
      case kExp: sp[top] = std::exp(sp[top]); break;
      case kLog: sp[top] = std::log(sp[top]); break;
      case kSqrt: sp[top] = std::sqrt(sp[top]); break;
      case kAbs: sp[top] = std::fabs(sp[top]); break;
      case kStep: sp[top] = sp[top] >= 0.0 ? 1.0 : 0.0; break;
    }
  }
  return sp[0];
}

bool Expr::depends_on_x() const { return uses_x_; }

namespace {

// Precedence levels for printing: + - are 1, * / are 2, unary minus 3,
// ^ is 4, atoms 5.
int node_prec(const Expr::Node& n);

void print_node(const Expr::Node& n, std::string& out) {
  using Kind = Expr::Node::Kind;
  switch (n.kind) {
    case Kind::Num:
      out += format_number(n.num);
      break;
    case Kind::X:
      out += 'x';
      break;
    case Kind::Param:
      out += n.name;
      break;
    case Kind::Neg: {
      out += '-';
      bool paren = node_prec(*n.a) < 3;
      if (paren) out += '(';
      print_node(*n.a, out);
      if (paren) out += ')';
      break;
    }
    case Kind::Call:
      out += func_name(n.fn);
      out += '(';
      print_node(*n.a, out);
      out += ')';
      break;
    case Kind::Bin: {
      int p = n.op == '+' || n.op == '-' ? 1 : n.op == '^' ? 4 : 2;
      bool right_assoc = n.op == '^';
      int pa = node_prec(*n.a);
      int pb = node_prec(*n.b);
      bool paren_a = pa < p || (pa == p && right_assoc);
      bool paren_b = pb < p || (pb == p && !right_assoc);
      if (paren_a) out += '(';
      print_node(*n.a, out);
      if (paren_a) out += ')';
      out += n.op;
      if (paren_b) out += '(';
      print_node(*n.b, out);
      if (paren_b) out += ')';
      break;
    }
  }
}

int node_prec(const Expr::Node& n) {
  using Kind = Expr::Node::Kind;
  switch (n.kind) {
    case Kind::Bin:
      return n.op == '+' || n.op == '-' ? 1 : n.op == '^' ? 4 : 2;
    case Kind::Neg:
      return 3;
    default:
      return 5;
  }
}

}  // namespace

std::string Expr::to_string() const {
  if (!root_) return "0";
  std::string out;
  print_node(*root_, out);
  return out;
}

static bool nodes_equal(const Expr::Node* a, const Expr::Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  using Kind = Expr::Node::Kind;
  switch (a->kind) {
    case Kind::Num:
      return a->num == b->num;
    case Kind::X:
      return true;
    case Kind::Param:
      return a->name == b->name && a->num == b->num;
    case Kind::Neg:
      return nodes_equal(a->a.get(), b->a.get());
    case Kind::Call:
      return a->fn == b->fn && nodes_equal(a->a.get(), b->a.get());
    case Kind::Bin:
      return a->op == b->op && nodes_equal(a->a.get(), b->a.get()) &&
             nodes_equal(a->b.get(), b->b.get());
  }
  return false;
}

bool Expr::same_tree(const Expr& other) const {
  return nodes_equal(root_.get(), other.root_.get());
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?
//   primary:= NUMBER | 'x' | 'pi' | IDENT | IDENT '(' expr ')' | '(' expr ')'

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  const std::map<std::string, double>* params;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw ParseError(msg + " at offset " + std::to_string(at), at);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input", pos);
    return e;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos;
      Expr rhs = term();
      e = c == '+' ? std::move(e) + std::move(rhs)
                   : std::move(e) - std::move(rhs);
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') break;
      ++pos;
      Expr rhs = unary();
      e = c == '*' ? std::move(e) * std::move(rhs)
                   : std::move(e) / std::move(rhs);
    }
    return e;
  }

  Expr unary() {
    if (eat('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (eat('^')) {
      Expr exponent = unary();
      return Expr::pow(std::move(base), std::move(exponent));
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression", pos);
    char c = text[pos];
    if (c == '(') {
      std::size_t open = pos;
      ++pos;
      Expr e = expr();
      if (!eat(')')) fail("missing ')' for '(' ", open);
      return e;
    }
    if (std::isdigit((unsigned char)c) || c == '.') return number();
    if (std::isalpha((unsigned char)c) || c == '_') return ident();
    fail(std::string("unexpected character '") + c + "'", pos);
  }

  Expr number() {
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    double value = 0.0;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr == first)
      fail("malformed number", pos);
    // from_chars accepts a leading sign form we never reach here, and stops
    // before exponent-less suffixes on its own.
    pos = (std::size_t)(res.ptr - text.data());
    return Expr::number(value);
  }

  Expr ident() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
      ++pos;
    std::string name(text.substr(start, pos - start));
    static const std::map<std::string, Expr::Func> kFuncs = {
        {"sin", Expr::Func::Sin}, {"cos", Expr::Func::Cos},
        {"exp", Expr::Func::Exp}, {"log", Expr::Func::Log},
        {"sqrt", Expr::Func::Sqrt}, {"abs", Expr::Func::Abs},
        {"step", Expr::Func::Step}};
    auto fn = kFuncs.find(name);
    if (fn != kFuncs.end()) {
      if (!eat('(')) fail("function '" + name + "' needs '('", pos);
      Expr arg = expr();
      if (!eat(')')) fail("missing ')' after argument of '" + name + "'", start);
      return Expr::call(fn->second, std::move(arg));
    }
    if (name == "x") return Expr::variable();
    if (name == "pi") return Expr::number(std::numbers::pi);
    if (params) {
      auto it = params->find(name);
      if (it != params->end()) return Expr::parameter(name, it->second);
    }
    fail("unknown name '" + name + "'", start);
  }
};

}  // namespace

Expr parse_expr(std::string_view text,
                const std::map<std::string, double>& params) {
  Parser p{text, 0, &params};
  return p.parse();
}

}  // namespace oscert

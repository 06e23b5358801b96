#include "mlkit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "mlkit/errors.hpp"

namespace mlkit {

FormulaNode FormulaNode::atom(Relation rel, MultiPoly lhs, MultiPoly rhs) {
  if (lhs.arity() != rhs.arity()) throw InputError("atom sides have different arities");
  FormulaNode n;
  n.kind = Kind::kAtom;
  n.relation = rel;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return n;
}

FormulaNode FormulaNode::negation(FormulaNode f) {
  FormulaNode n;
  n.kind = Kind::kNot;
  n.children.push_back(std::move(f));
  return n;
}

FormulaNode FormulaNode::conjunction(std::vector<FormulaNode> fs) {
  if (fs.empty()) throw InputError("'and' needs at least one operand");
  FormulaNode n;
  n.kind = Kind::kAnd;
  n.children = std::move(fs);
  return n;
}

FormulaNode FormulaNode::disjunction(std::vector<FormulaNode> fs) {
  if (fs.empty()) throw InputError("'or' needs at least one operand");
  FormulaNode n;
  n.kind = Kind::kOr;
  n.children = std::move(fs);
  return n;
}

FormulaNode FormulaNode::block(std::size_t size, FormulaNode body) {
  if (size == 0) throw InputError("block must bind at least one point");
  if (body.has_blocks()) throw InputError("block bodies must be quantifier-free");
  FormulaNode n;
  n.kind = Kind::kBlock;
  n.block_size = size;
  n.children.push_back(std::move(body));
  return n;
}

bool FormulaNode::has_blocks() const {
  if (kind == Kind::kBlock) return true;
  return std::any_of(children.begin(), children.end(), [](const FormulaNode& c) { return c.has_blocks(); });
}

Formula::Formula(std::size_t free_arity, FormulaNode root) : free_arity_(free_arity), root_(std::move(root)) {}

// ---------------------------------------------------------------------------
// Printing

std::string poly_sexpr(const MultiPoly& p, std::size_t free_arity) {
  if (p.is_zero()) return "0";
  auto var_name = [free_arity](std::size_t i) {
    return i < free_arity ? "x" + std::to_string(i + 1) : "y" + std::to_string(i - free_arity + 1);
  };
  std::vector<std::string> terms;
  for (const auto& [e, c] : p.terms()) {
    std::vector<std::string> factors;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      factors.push_back(e[i] == 1 ? var_name(i) : "(^ " + var_name(i) + " " + std::to_string(e[i]) + ")");
    }
    if (factors.empty()) {
      terms.push_back(c.str());
    } else if (c == Rational(1) && factors.size() == 1) {
      terms.push_back(factors.front());
    } else {
      std::string t = "(*";
      if (c != Rational(1)) t += " " + c.str();
      for (const auto& f : factors) t += " " + f;
      terms.push_back(t + ")");
    }
  }
  if (terms.size() == 1) return terms.front();
  std::string s = "(+";
  for (const auto& t : terms) s += " " + t;
  return s + ")";
}

namespace {

void print_node(const FormulaNode& n, std::size_t s, std::string& out) {
  using Kind = FormulaNode::Kind;
  switch (n.kind) {
    case Kind::kAtom: {
      const char* op = n.relation == Relation::kEq ? "=" : (n.relation == Relation::kLt ? "<" : "<=");
      out += "(";
      out += op;
      out += " " + poly_sexpr(n.lhs, s) + " " + poly_sexpr(n.rhs, s) + ")";
      return;
    }
    case Kind::kNot:
      out += "(not ";
      print_node(n.children.front(), s, out);
      out += ")";
      return;
    case Kind::kAnd:
    case Kind::kOr:
      out += n.kind == Kind::kAnd ? "(and" : "(or";
      for (const auto& c : n.children) {
        out += " ";
        print_node(c, s, out);
      }
      out += ")";
      return;
    case Kind::kBlock:
      out += "(exists-gamma " + std::to_string(n.block_size) + " ";
      print_node(n.body(), s, out);
      out += ")";
      return;
  }
}

}  // namespace

std::string Formula::str() const {
  std::string out;
  print_node(root_, free_arity_, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_top() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty input", line_, col_);
    SExpr e = read();
    skip_space();
    if (pos_ < text_.size()) throw ParseError("unexpected trailing input", line_, col_);
    return e;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    SExpr e;
    e.line = line_;
    e.column = col_;
    if (text_[pos_] == ')') throw ParseError("unexpected ')'", line_, col_);
    if (text_[pos_] == '(') {
      e.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unclosed '('", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
      e.atom += c;
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

[[noreturn]] void fail(const SExpr& e, const std::string& what) { throw ParseError(what, e.line, e.column); }

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct VarRef {
  bool bound;        // y variable
  std::size_t index; // 1-based
};

std::optional<VarRef> as_variable(const std::string& atom) {
  if (atom.size() < 2 || (atom[0] != 'x' && atom[0] != 'y')) return std::nullopt;
  const std::string digits = atom.substr(1);
  if (!is_digits(digits) || digits[0] == '0') return std::nullopt;
  return VarRef{atom[0] == 'y', std::stoul(digits)};
}

bool is_rational_token(const std::string& atom) {
  std::string_view body = atom;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  if (slash == std::string_view::npos) return is_digits(body);
  return is_digits(body.substr(0, slash)) && is_digits(body.substr(slash + 1));
}

std::size_t max_free_index(const SExpr& e) {
  if (!e.is_list) {
    const auto v = as_variable(e.atom);
    return v && !v->bound ? v->index : 0;
  }
  std::size_t m = 0;
  for (const auto& item : e.items) m = std::max(m, max_free_index(item));
  return m;
}

const std::string& head_of(const SExpr& e) {
  if (!e.is_list || e.items.empty() || e.items.front().is_list) fail(e, "expected an operator application");
  return e.items.front().atom;
}

class Builder {
 public:
  explicit Builder(std::size_t free_arity) : s_(free_arity) {}

  // bound_points: number of points bound by the enclosing block, or 0.
  MultiPoly poly(const SExpr& e, std::size_t bound_points) const {
    const std::size_t arity = s_ + 2 * bound_points;
    if (!e.is_list) {
      if (e.atom.empty()) fail(e, "expected a polynomial");
      if (const auto v = as_variable(e.atom)) {
        if (!v->bound) return MultiPoly::variable(arity, v->index - 1);
        if (bound_points == 0) fail(e, "unbound variable " + e.atom + " outside exists-gamma");
        if (v->index > 2 * bound_points) {
          fail(e, "unbound variable " + e.atom + " (block binds y1..y" + std::to_string(2 * bound_points) + ")");
        }
        return MultiPoly::variable(arity, s_ + v->index - 1);
      }
      if (is_rational_token(e.atom)) {
        try {
          return MultiPoly::constant(arity, Rational::parse(e.atom));
        } catch (const InputError& err) {
          fail(e, err.what());
        }
      }
      fail(e, "unexpected token '" + e.atom + "' in polynomial");
    }
    const std::string& op = head_of(e);
    const std::size_t argc = e.items.size() - 1;
    if (op == "+" || op == "*") {
      if (argc < 1) fail(e, "'" + op + "' needs at least one operand");
      MultiPoly acc = poly(e.items[1], bound_points);
      for (std::size_t i = 2; i < e.items.size(); ++i) {
        if (op == "+") {
          acc += poly(e.items[i], bound_points);
        } else {
          acc = acc * poly(e.items[i], bound_points);
        }
      }
      return acc;
    }
    if (op == "-") {
      if (argc != 2) fail(e, "'-' takes exactly two operands");
      return poly(e.items[1], bound_points) - poly(e.items[2], bound_points);
    }
    if (op == "^") {
      if (argc != 2) fail(e, "'^' takes a polynomial and a positive exponent");
      const SExpr& exp = e.items[2];
      if (exp.is_list || !is_digits(exp.atom) || exp.atom.size() > 6 || std::stoul(exp.atom) == 0) {
        fail(exp, "exponent must be a positive integer");
      }
      return poly(e.items[1], bound_points).pow(static_cast<unsigned>(std::stoul(exp.atom)));
    }
    fail(e, "unknown polynomial operator '" + op + "'");
  }

  FormulaNode formula(const SExpr& e, bool allow_blocks, std::size_t bound_points) const {
    if (!e.is_list) fail(e, "expected a formula, found '" + e.atom + "'");
    const std::string& op = head_of(e);
    const std::size_t argc = e.items.size() - 1;
    if (op == "=" || op == "<" || op == "<=") {
      if (argc != 2) fail(e, "'" + op + "' takes exactly two polynomials");
      const Relation rel = op == "=" ? Relation::kEq : (op == "<" ? Relation::kLt : Relation::kLe);
      return FormulaNode::atom(rel, poly(e.items[1], bound_points), poly(e.items[2], bound_points));
    }
    if (op == "not") {
      if (argc != 1) fail(e, "'not' takes exactly one operand");
      return FormulaNode::negation(formula(e.items[1], allow_blocks, bound_points));
    }
    if (op == "and" || op == "or") {
      if (argc < 1) fail(e, "'" + op + "' needs at least one operand");
      std::vector<FormulaNode> parts;
      for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(formula(e.items[i], allow_blocks, bound_points));
      return op == "and" ? FormulaNode::conjunction(std::move(parts)) : FormulaNode::disjunction(std::move(parts));
    }
    if (op == "exists-gamma") {
      if (!allow_blocks) fail(e, "exists-gamma is not allowed inside a block body");
      if (argc != 2) fail(e, "exists-gamma takes a point count and a quantifier-free body");
      const SExpr& count = e.items[1];
      if (count.is_list || !is_digits(count.atom)) fail(count, "exists-gamma point count must be an integer");
      if (count.atom.size() > 3 || std::stoul(count.atom) == 0) {
        fail(count, "arity clash: exists-gamma must bind between 1 and 999 points");
      }
      const std::size_t n = std::stoul(count.atom);
      return FormulaNode::block(n, formula(e.items[2], false, n));
    }
    fail(e, "unknown formula operator '" + op + "'");
  }

 private:
  std::size_t s_;
};

}  // namespace

Formula parse_formula(std::string_view text, std::size_t min_free_arity) {
  const SExpr tree = Reader(text).read_top();
  const std::size_t s = std::max(min_free_arity, max_free_index(tree));
  return Formula(s, Builder(s).formula(tree, true, 0));
}

MultiPoly parse_polynomial(std::string_view text, std::size_t min_arity) {
  const SExpr tree = Reader(text).read_top();
  const std::size_t s = std::max(min_arity, max_free_index(tree));
  return Builder(s).poly(tree, 0);
}

// ---------------------------------------------------------------------------
// Evaluation

bool eval_qf(const FormulaNode& node, std::span<const Rational> assignment) {
  using Kind = FormulaNode::Kind;
  switch (node.kind) {
    case Kind::kAtom: {
      const std::size_t arity = node.lhs.arity();
      if (assignment.size() < arity) {
        throw InputError("assignment has " + std::to_string(assignment.size()) + " values, formula needs " +
                         std::to_string(arity));
      }
      const auto vals = assignment.first(arity);
      const Rational diff = node.lhs.eval(vals) - node.rhs.eval(vals);
      switch (node.relation) {
        case Relation::kEq: return diff.is_zero();
        case Relation::kLt: return diff.sign() < 0;
        case Relation::kLe: return diff.sign() <= 0;
      }
      return false;
    }
    case Kind::kNot: return !eval_qf(node.children.front(), assignment);
    case Kind::kAnd:
      return std::all_of(node.children.begin(), node.children.end(),
                         [&](const FormulaNode& c) { return eval_qf(c, assignment); });
    case Kind::kOr:
      return std::any_of(node.children.begin(), node.children.end(),
                         [&](const FormulaNode& c) { return eval_qf(c, assignment); });
    case Kind::kBlock: throw InputError("eval_qf called on a formula with exists-gamma blocks");
  }
  return false;
}

bool eval_qf(const Formula& f, std::span<const Rational> assignment) {
  if (f.root().has_blocks()) throw InputError("eval_qf called on a formula with exists-gamma blocks");
  if (assignment.size() < f.free_arity()) {
    throw InputError("assignment has " + std::to_string(assignment.size()) + " values, formula has " +
                     std::to_string(f.free_arity()) + " free variables");
  }
  return eval_qf(f.root(), assignment);
}

std::string TriBool::str() const {
  switch (value) {
    case Value::kFalse: return "false";
    case Value::kUnknown: return "unknown(bound=" + std::to_string(bound) + ")";
    case Value::kTrue: break;
  }
  if (witnesses.empty()) return "true";
  auto render = [](const Witness& w) {
    std::string s = "[";
    for (std::size_t i = 0; i < w.points.size(); ++i) s += (i ? ", " : "") + w.points[i].str();
    return s + "]";
  };
  if (witnesses.size() == 1) return "true (witness: " + render(witnesses.front()) + ")";
  std::string s = "true (witnesses:";
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    s += (i ? "; #" : " #") + std::to_string(witnesses[i].block_id) + " " + render(witnesses[i]);
  }
  return s + ")";
}

namespace {

bool node_uses_variable(const FormulaNode& n, std::size_t index) {
  if (n.kind == FormulaNode::Kind::kAtom) return n.lhs.uses_variable(index) || n.rhs.uses_variable(index);
  return std::any_of(n.children.begin(), n.children.end(),
                     [index](const FormulaNode& c) { return node_uses_variable(c, index); });
}

// Assignment (x, y) for a block, or nullopt when an identity slot's
// coordinates are referenced by the body.
std::optional<std::vector<Rational>> block_assignment(const FormulaNode& body, std::size_t s,
                                                      std::span<const Rational> x,
                                                      std::span<const GroupPoint* const> points,
                                                      const std::vector<bool>& slot_used) {
  std::vector<Rational> values(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(s));
  (void)body;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const GroupPoint& p = *points[j];
    if (p.is_identity()) {
      if (slot_used[j]) return std::nullopt;
      values.emplace_back();
      values.emplace_back();
    } else {
      values.push_back(p.x());
      values.push_back(p.y());
    }
  }
  return values;
}

std::vector<bool> slots_used(const FormulaNode& body, std::size_t s, std::size_t n) {
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    used[j] = node_uses_variable(body, s + 2 * j) || node_uses_variable(body, s + 2 * j + 1);
  }
  return used;
}

void check_free_assignment(std::size_t s, std::span<const Rational> x) {
  if (x.size() < s) {
    throw InputError("formula has " + std::to_string(s) + " free variables but " + std::to_string(x.size()) +
                     " values were given");
  }
}

}  // namespace

TriBool eval_block(const GammaSpec& gamma, const FormulaNode& block, std::size_t free_arity,
                   std::span<const Rational> x, const EvalOptions& options, std::size_t block_id) {
  if (block.kind != FormulaNode::Kind::kBlock) throw InputError("eval_block needs an exists-gamma node");
  check_free_assignment(free_arity, x);
  const std::size_t n = block.block_size;
  const FormulaNode& body = block.body();
  const std::vector<bool> used = slots_used(body, free_arity, n);
  const GammaBox box(gamma, options.bound, options.ceiling);

  std::optional<Witness> found;
  std::vector<const GroupPoint*> points(n);
  box.for_each_tuple(
      n,
      [&](std::span<const std::size_t> slots) {
        for (std::size_t j = 0; j < n; ++j) points[j] = &box.point(slots[j]);
        const auto values = block_assignment(body, free_arity, x, points, used);
        if (!values || !eval_qf(body, *values)) return true;
        Witness w;
        w.block_id = block_id;
        for (std::size_t j = 0; j < n; ++j) {
          w.coords.push_back(box.coords(slots[j]));
          w.points.push_back(box.point(slots[j]));
        }
        found = std::move(w);
        return false;
      },
      options.ceiling);
  if (found) return TriBool::make_true({std::move(*found)});
  if (gamma.rank() == 0) return TriBool::make_false();
  return TriBool::make_unknown(options.bound);
}

namespace {

TriBool eval_node(const GammaSpec& gamma, const FormulaNode& node, std::size_t s, std::span<const Rational> x,
                  const EvalOptions& options, std::size_t& next_block) {
  using Kind = FormulaNode::Kind;
  switch (node.kind) {
    case Kind::kAtom:
      return eval_qf(node, x) ? TriBool::make_true() : TriBool::make_false();
    case Kind::kBlock:
      return eval_block(gamma, node, s, x, options, next_block++);
    case Kind::kNot: {
      const TriBool inner = eval_node(gamma, node.children.front(), s, x, options, next_block);
      if (inner.is_true()) return TriBool::make_false();
      if (inner.is_false()) return TriBool::make_true();
      return inner;
    }
    case Kind::kAnd:
    case Kind::kOr: {
      const bool is_and = node.kind == Kind::kAnd;
      // Kleene: a determining operand (False for and, True for or) decides.
      // Block ids stay stable because every child is numbered even when the
      // result is already known.
      std::optional<TriBool> decided;
      std::vector<Witness> witnesses;
      bool unknown = false;
      long bound = 0;
      for (const FormulaNode& c : node.children) {
        if (decided) {
          next_block += collect_blocks(c).size();
          continue;
        }
        TriBool v = eval_node(gamma, c, s, x, options, next_block);
        if (is_and ? v.is_false() : v.is_true()) {
          decided = std::move(v);
        } else if (v.is_unknown()) {
          unknown = true;
          bound = v.bound;
        } else if (v.is_true()) {
          for (auto& w : v.witnesses) witnesses.push_back(std::move(w));
        }
      }
      if (decided) return *decided;
      if (unknown) return TriBool::make_unknown(bound);
      return is_and ? TriBool::make_true(std::move(witnesses)) : TriBool::make_false();
    }
  }
  return TriBool::make_false();
}

void collect(const FormulaNode& n, std::vector<const FormulaNode*>& out) {
  if (n.kind == FormulaNode::Kind::kBlock) {
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children) collect(c, out);
}

}  // namespace

std::vector<const FormulaNode*> collect_blocks(const FormulaNode& root) {
  std::vector<const FormulaNode*> out;
  collect(root, out);
  return out;
}

TriBool eval_formula(const GammaSpec& gamma, const Formula& f, std::span<const Rational> x,
                     const EvalOptions& options) {
  check_free_assignment(f.free_arity(), x);
  std::size_t next_block = 0;
  return eval_node(gamma, f.root(), f.free_arity(), x, options, next_block);
}

bool witness_valid(const GammaSpec& gamma, const FormulaNode& block, std::size_t free_arity,
                   std::span<const Rational> x, const Witness& w) {
  if (block.kind != FormulaNode::Kind::kBlock || w.points.size() != block.block_size ||
      w.coords.size() != block.block_size) {
    return false;
  }
  std::vector<const GroupPoint*> points;
  for (std::size_t j = 0; j < w.points.size(); ++j) {
    if (!on_variety(gamma.backend(), w.points[j])) return false;
    if (realize(gamma, w.coords[j]) != w.points[j]) return false;
    points.push_back(&w.points[j]);
  }
  const auto used = slots_used(block.body(), free_arity, block.block_size);
  const auto values = block_assignment(block.body(), free_arity, x, points, used);
  return values && eval_qf(block.body(), *values);
}

}  // namespace mlkit

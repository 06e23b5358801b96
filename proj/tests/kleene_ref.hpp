// Three-valued reference evaluation: blocks one at a time, connectives by
// the Kleene truth tables.
#pragma once

#include "mlkit/formula.hpp"

namespace kleene {

inline mlkit::TriBool::Value reference(const mlkit::GammaSpec& g, const mlkit::FormulaNode& node, std::size_t s,
                                       std::span<const mlkit::Rational> x, const mlkit::EvalOptions& opt) {
  using V = mlkit::TriBool::Value;
  using K = mlkit::FormulaNode::Kind;
  switch (node.kind) {
    case K::kAtom: return mlkit::eval_qf(node, x) ? V::kTrue : V::kFalse;
    case K::kBlock: return mlkit::eval_block(g, node, s, x, opt).value;
    case K::kNot: {
      const V v = reference(g, node.body(), s, x, opt);
      return v == V::kTrue ? V::kFalse : v == V::kFalse ? V::kTrue : V::kUnknown;
    }
    case K::kAnd:
    case K::kOr: {
      const bool is_and = node.kind == K::kAnd;
      bool unknown = false;
      for (const auto& c : node.children) {
        const V v = reference(g, c, s, x, opt);
        if (v == (is_and ? V::kFalse : V::kTrue)) return v;
        if (v == V::kUnknown) unknown = true;
      }
      return unknown ? V::kUnknown : (is_and ? V::kTrue : V::kFalse);
    }
  }
  return V::kUnknown;
}

inline mlkit::TriBool::Value negate(mlkit::TriBool::Value v) {
  using V = mlkit::TriBool::Value;
  return v == V::kTrue ? V::kFalse : v == V::kFalse ? V::kTrue : V::kUnknown;
}

}  // namespace kleene

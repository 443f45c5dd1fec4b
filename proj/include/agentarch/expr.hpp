#pragma once

#include <memory>
#include <string>

#include "agentarch/diagram.hpp"

namespace agentarch {

struct HypergraphPresentation;

// Surface-syntax diagram expressions. Kept alongside evaluated diagrams so
// files can be re-rendered in the shape their author wrote (the evaluated
// open hypergraph has no preferred expression).
struct DiagExpr;
using DiagExprPtr = std::shared_ptr<const DiagExpr>;

struct DiagExpr {
  enum class Op {
    Gen,      // generator name atom
    Id,       // id[T]
    Copy,     // copy[T]     spider (1,2)
    Merge,    // merge[T]    spider (2,1)
    Unit,     // unit[T]     spider (0,1)
    Counit,   // counit[T]   spider (1,0)
    Cap,      // cap[T]      spider (2,0)
    Cup,      // cup[T]      spider (0,2)
    Sym,      // sym[T,U]
    Compose,  // lhs ; rhs
    Tensor,   // lhs * rhs
  };

  Op op;
  std::string gen_name;          // Gen
  TypeSymbol t1, t2;             // type arguments
  DiagExprPtr lhs, rhs;          // Compose/Tensor

  static DiagExprPtr gen(std::string name);
  static DiagExprPtr atom(Op op, TypeSymbol t);
  static DiagExprPtr sym(TypeSymbol a, TypeSymbol b);
  static DiagExprPtr compose(DiagExprPtr a, DiagExprPtr b);
  static DiagExprPtr tensor(DiagExprPtr a, DiagExprPtr b);
};

// Evaluate over a presentation; throws UndeclaredSymbol / BoundaryTypeMismatch.
OpenHypergraph eval_expr(const DiagExpr& e, const HypergraphPresentation& p);

// Minimal-parentheses printing; ';' binds looser than '*'.
std::string print_expr(const DiagExpr& e);

}  // namespace agentarch

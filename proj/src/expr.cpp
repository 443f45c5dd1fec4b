#include "agentarch/expr.hpp"

#include "agentarch/errors.hpp"
#include "agentarch/signature.hpp"

namespace agentarch {

DiagExprPtr DiagExpr::gen(std::string name) {
  auto e = std::make_shared<DiagExpr>();
  e->op = Op::Gen;
  e->gen_name = std::move(name);
  return e;
}

DiagExprPtr DiagExpr::atom(Op op, TypeSymbol t) {
  auto e = std::make_shared<DiagExpr>();
  e->op = op;
  e->t1 = std::move(t);
  return e;
}

DiagExprPtr DiagExpr::sym(TypeSymbol a, TypeSymbol b) {
  auto e = std::make_shared<DiagExpr>();
  e->op = Op::Sym;
  e->t1 = std::move(a);
  e->t2 = std::move(b);
  return e;
}

DiagExprPtr DiagExpr::compose(DiagExprPtr a, DiagExprPtr b) {
  auto e = std::make_shared<DiagExpr>();
  e->op = Op::Compose;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

DiagExprPtr DiagExpr::tensor(DiagExprPtr a, DiagExprPtr b) {
  auto e = std::make_shared<DiagExpr>();
  e->op = Op::Tensor;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

OpenHypergraph eval_expr(const DiagExpr& e, const HypergraphPresentation& p) {
  auto need_type = [&](const TypeSymbol& t) {
    if (!p.has_type(t)) throw undeclared_symbol("diagram expression uses undeclared type '" + t.name + "'");
  };
  switch (e.op) {
    case DiagExpr::Op::Gen: {
      const GeneratorSymbol* g = p.find_generator(e.gen_name);
      if (!g) throw undeclared_symbol("diagram expression uses undeclared generator '" + e.gen_name + "'");
      return og_generator(*g);
    }
    case DiagExpr::Op::Id: need_type(e.t1); return og_identity({e.t1});
    case DiagExpr::Op::Copy: need_type(e.t1); return og_spider(e.t1, 1, 2);
    case DiagExpr::Op::Merge: need_type(e.t1); return og_spider(e.t1, 2, 1);
    case DiagExpr::Op::Unit: need_type(e.t1); return og_spider(e.t1, 0, 1);
    case DiagExpr::Op::Counit: need_type(e.t1); return og_spider(e.t1, 1, 0);
    case DiagExpr::Op::Cap: need_type(e.t1); return og_spider(e.t1, 2, 0);
    case DiagExpr::Op::Cup: need_type(e.t1); return og_spider(e.t1, 0, 2);
    case DiagExpr::Op::Sym:
      need_type(e.t1);
      need_type(e.t2);
      return og_symmetry({e.t1}, {e.t2});
    case DiagExpr::Op::Compose: return og_compose(eval_expr(*e.lhs, p), eval_expr(*e.rhs, p));
    case DiagExpr::Op::Tensor: return og_tensor(eval_expr(*e.lhs, p), eval_expr(*e.rhs, p));
  }
  throw Error("Internal", "unreachable expression op");
}

namespace {

// Precedence: ';' (1) binds looser than '*' (2); atoms are 3.
int prec(DiagExpr::Op op) {
  switch (op) {
    case DiagExpr::Op::Compose: return 1;
    case DiagExpr::Op::Tensor: return 2;
    default: return 3;
  }
}

void print(const DiagExpr& e, int parent_prec, std::string& out) {
  const int p = prec(e.op);
  const bool parens = p < parent_prec;
  if (parens) out += "(";
  switch (e.op) {
    case DiagExpr::Op::Gen: out += e.gen_name; break;
    case DiagExpr::Op::Id: out += "id[" + e.t1.name + "]"; break;
    case DiagExpr::Op::Copy: out += "copy[" + e.t1.name + "]"; break;
    case DiagExpr::Op::Merge: out += "merge[" + e.t1.name + "]"; break;
    case DiagExpr::Op::Unit: out += "unit[" + e.t1.name + "]"; break;
    case DiagExpr::Op::Counit: out += "counit[" + e.t1.name + "]"; break;
    case DiagExpr::Op::Cap: out += "cap[" + e.t1.name + "]"; break;
    case DiagExpr::Op::Cup: out += "cup[" + e.t1.name + "]"; break;
    case DiagExpr::Op::Sym: out += "sym[" + e.t1.name + ", " + e.t2.name + "]"; break;
    case DiagExpr::Op::Compose:
      print(*e.lhs, p, out);
      out += " ; ";
      print(*e.rhs, p, out);  // right operand at same prec: associative, no parens
      break;
    case DiagExpr::Op::Tensor:
      print(*e.lhs, p, out);
      out += " * ";
      print(*e.rhs, p, out);
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string print_expr(const DiagExpr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

}  // namespace agentarch

#pragma once

#include <map>
#include <string>
#include <vector>

#include "agentarch/archcat.hpp"
#include "agentarch/env.hpp"
#include "agentarch/expr.hpp"

namespace agentarch {

// Textual format for architectures, morphisms and environments. Parsing is
// strict: errors are SyntaxError with exact 1-based line/column and the
// expected-token set. Rendering is canonical: types print alphabetically,
// generators and constraints in declaration order, expressions with minimal
// parentheses (';' binds looser than '*'). A diagram too tangled for a term
// expression is written as a literal block
//
//   diagram { wires { w0 : S; ... } in = (w0); out = (w1); edges { G(w0) -> (w1); } }
//
// which is an ordinary expression atom; rendering falls back to it whenever
// no surface term expression is on record.

Architecture parse_architecture(const std::string& text, const std::string& filename = "");
std::string render_architecture(const Architecture& a);

// A wiring block before name resolution. Morphism files keep their literal
// images raw because generator profiles live in the target architecture,
// which is not in scope while the file parses.
struct RawDiagram {
  struct Wire {
    std::string name, type;
  };
  struct Edge {
    std::string gen;
    std::vector<std::string> in, out;
  };
  std::vector<Wire> wires;
  std::vector<std::string> in, out;
  std::vector<Edge> edges;
};

// Throws UndeclaredSymbol / UnknownName / BoundaryTypeMismatch (no source
// positions; callers with positions wrap into SyntaxError).
OpenHypergraph resolve_raw_diagram(const RawDiagram& raw, const HypergraphPresentation& p);

// Morphism files carry images over the *target* architecture, so they parse
// in two phases: a symbolic file, then resolution against the two
// architectures it connects. Per generator the image is either a term
// expression or a literal, never both.
struct MorphismFile {
  std::string name, source, target;
  std::map<std::string, std::string> type_map_syn, type_map_know;
  std::map<std::string, DiagExprPtr> gen_expr_syn, gen_expr_know;
  std::map<std::string, RawDiagram> gen_literal_syn, gen_literal_know;
};
MorphismFile parse_morphism_file(const std::string& text, const std::string& filename = "");
ArchMorphism resolve_morphism(const MorphismFile& file, const Architecture& source,
                              const Architecture& target);
std::string render_morphism(const ArchMorphism& f);

EnvSpec parse_env(const std::string& text, const std::string& filename = "");
std::string render_env(const EnvSpec& env);

enum class FileKind { architecture, morphism, env };
// Reads the leading keyword; throws SyntaxError when it is none of the three.
FileKind sniff_kind(const std::string& text, const std::string& filename = "");

}  // namespace agentarch

#include <string>

#include "doctest.h"

#include "agentarch/archcat.hpp"
#include "agentarch/corpus.hpp"
#include "agentarch/dsl.hpp"
#include "agentarch/errors.hpp"
#include "agentarch/expr.hpp"
#include "equiv.hpp"
#include "helpers.hpp"

using namespace agentarch;
using testutil::read_file;
using testutil::src_path;

namespace {

std::string stem_of(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  return path.substr(slash + 1, dot - slash - 1);
}

HypergraphPresentation law_presentation() {
  HypergraphPresentation p;
  p.types = testutil::law_types();
  p.generators = testutil::law_generators();
  return p;
}

}  // namespace

TEST_CASE("every embedded architecture round-trips through the renderer") {
  for (const auto& [path, text] : corpus_sources()) {
    if (sniff_kind(text, path) != FileKind::architecture) continue;
    CAPTURE(path);
    Architecture first = parse_architecture(text, path);
    std::string rendered = render_architecture(first);
    Architecture second = parse_architecture(rendered, path + " (rendered)");
    CHECK(testutil::arch_mismatch(first, second) == "");
    // rendering is canonical: a second round trip is a byte-level fixed point
    CHECK(render_architecture(second) == rendered);
  }
}

TEST_CASE("every embedded morphism resolves to its built-in twin and round-trips") {
  for (const auto& [path, text] : corpus_sources()) {
    if (sniff_kind(text, path) != FileKind::morphism) continue;
    CAPTURE(path);
    MorphismFile file = parse_morphism_file(text, path);
    const Architecture& src = builtin(file.source);
    const Architecture& tgt = builtin(file.target);
    ArchMorphism resolved = resolve_morphism(file, src, tgt);
    CHECK(testutil::morphism_mismatch(resolved, builtin_morphism(stem_of(path))) == "");

    std::string rendered = render_morphism(resolved);
    MorphismFile file2 = parse_morphism_file(rendered, path + " (rendered)");
    ArchMorphism again = resolve_morphism(file2, src, tgt);
    CHECK(testutil::morphism_mismatch(resolved, again) == "");
    CHECK(render_morphism(again) == rendered);
  }
}

TEST_CASE("environment files round-trip exactly, including probabilities") {
  for (const std::string name : {"grid4", "chain2", "chain2_loop"}) {
    CAPTURE(name);
    std::string text = read_file(src_path(std::string("envs/") + name + ".env"));
    EnvSpec first = parse_env(text, name);
    std::string rendered = render_env(first);
    EnvSpec second = parse_env(rendered, name);
    CHECK(testutil::env_mismatch(first, second) == "");
    CHECK(render_env(second) == rendered);
  }
}

TEST_CASE("sniff_kind reads the leading keyword") {
  CHECK(sniff_kind("architecture X {}") == FileKind::architecture);
  CHECK(sniff_kind("  \n// note\nmorphism f : A -> B {}") == FileKind::morphism);
  CHECK(sniff_kind("env e { }") == FileKind::env);
  CHECK_THROWS_AS(sniff_kind("banana"), SyntaxError);
}

TEST_CASE("parse errors carry exact one-based positions") {
  SUBCASE("a number where a type name belongs") {
    const std::string text =
        "architecture X {\n"
        "  syntax {\n"
        "    types { 7; }\n"
        "  }\n"
        "}\n";
    try {
      parse_architecture(text);
      FAIL("expected a SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.kind() == "SyntaxError");
      CHECK(e.line() == 3);
      CHECK(e.column() == 13);
    }
  }
  SUBCASE("an unclosed boundary tuple inside a diagram literal") {
    const std::string text =
        "architecture X {\n"
        "  pattern = diagram {\n"
        "    wires { w : W; }\n"
        "    in = (w;\n"
        "  }\n"
        "}\n";
    try {
      parse_architecture(text);
      FAIL("expected a SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 4);
      CHECK(e.column() == 12);
    }
  }
  SUBCASE("reserved words cannot name types") {
    const std::string text =
        "architecture X {\n"
        "  syntax {\n"
        "    types { id; }\n"
        "  }\n"
        "}\n";
    try {
      parse_architecture(text);
      FAIL("expected a SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 13);
      CHECK(std::string(e.what()).find("reserved") != std::string::npos);
    }
  }
  SUBCASE("the file name is woven into the message") {
    try {
      parse_architecture("architecture {", "bad.arch");
      FAIL("expected a SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.file() == "bad.arch");
      CHECK(std::string(e.what()).find("bad.arch:1:14") != std::string::npos);
    }
  }
}

TEST_CASE("an architecture with no blocks at all is legal") {
  Architecture tiny = parse_architecture("architecture Tiny {}");
  CHECK(tiny.name == "Tiny");
  CHECK(arch_validate(tiny).ok());
  std::string rendered = render_architecture(tiny);
  Architecture again = parse_architecture(rendered);
  CHECK(testutil::arch_mismatch(tiny, again) == "");
}

TEST_CASE("duplicate declarations are rejected at the duplicate") {
  const std::string text =
      "architecture X {\n"
      "  syntax {\n"
      "    types { S; S; }\n"
      "  }\n"
      "}\n";
  try {
    parse_architecture(text);
    FAIL("expected a SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 16);
    CHECK(std::string(e.what()).find("duplicate type 'S'") != std::string::npos);
  }
}

TEST_CASE("expression printing uses minimal parentheses") {
  auto f = DiagExpr::gen("f");
  auto g = DiagExpr::gen("g");
  auto h = DiagExpr::gen("h");
  auto idx = DiagExpr::atom(DiagExpr::Op::Id, {"X"});

  CHECK(print_expr(*DiagExpr::compose(DiagExpr::tensor(f, idx), g)) == "f * id[X] ; g");
  CHECK(print_expr(*DiagExpr::tensor(DiagExpr::compose(f, g), h)) == "(f ; g) * h");
  CHECK(print_expr(*DiagExpr::sym({"A"}, {"B"})) == "sym[A, B]");
  CHECK(print_expr(*DiagExpr::atom(DiagExpr::Op::Cup, {"T"})) == "cup[T]");
  CHECK(print_expr(*DiagExpr::compose(DiagExpr::compose(f, g), h)) == "f ; g ; h");
}

TEST_CASE("printed expressions parse back to equal diagrams") {
  HypergraphPresentation p = law_presentation();
  auto f = DiagExpr::gen("f");   // X -> Y
  auto g = DiagExpr::gen("g");   // Y -> Z
  auto k = DiagExpr::gen("k");   // Z -> X * X
  auto expr = DiagExpr::compose(DiagExpr::compose(f, g),
                                DiagExpr::compose(k, DiagExpr::sym({"X"}, {"X"})));
  OpenHypergraph direct = eval_expr(*expr, p);

  // embed the printed expression in a file and parse the whole thing back
  std::string text =
      "architecture Laws {\n"
      "  syntax {\n"
      "    types { X; Y; Z; }\n"
      "    generators {\n"
      "      f : X -> Y;\n"
      "      g : Y -> Z;\n"
      "      h : X * Y -> Z;\n"
      "      k : Z -> X * X;\n"
      "      mk : Y * Z -> Y;\n"
      "      src : 1 -> Y;\n"
      "      snk : Z -> 1;\n"
      "    }\n"
      "  }\n"
      "  pattern = " +
      print_expr(*expr) + ";\n}\n";
  Architecture a = parse_architecture(text);
  CHECK(og_equal(a.pattern.diagram, direct));
}

TEST_CASE("eval_expr agrees with direct diagram algebra") {
  HypergraphPresentation p = law_presentation();
  auto f = DiagExpr::gen("f");
  auto g = DiagExpr::gen("g");
  OpenHypergraph via_expr = eval_expr(*DiagExpr::compose(f, g), p);
  OpenHypergraph direct =
      og_compose(og_generator(*p.find_generator("f")), og_generator(*p.find_generator("g")));
  CHECK(og_equal(via_expr, direct));

  OpenHypergraph spider = eval_expr(*DiagExpr::atom(DiagExpr::Op::Merge, {"X"}), p);
  CHECK(og_equal(spider, og_spider({"X"}, 2, 1)));

  CHECK_THROWS_AS(eval_expr(*DiagExpr::gen("ghost"), p), Error);
  CHECK_THROWS_AS(eval_expr(*DiagExpr::atom(DiagExpr::Op::Id, {"W"}), p), Error);
}

TEST_CASE("the canonical feedback pattern equals its sequential term expression") {
  // Ten-stage surface term for the classic perceive/act/update loop: the
  // carrier wire is closed with cup/cap, the state is copied to the policy
  // and the environment, and the environment output feeds the update.
  const std::string text =
      "architecture RLTerm {\n"
      "  syntax {\n"
      "    types { A; E; S; Theta_s; }\n"
      "    generators {\n"
      "      Policy : S * Theta_s -> A;\n"
      "      EnvInteraction : S * A -> E;\n"
      "      Update : Theta_s * E -> Theta_s;\n"
      "    }\n"
      "  }\n"
      "  pattern = (id[S] * cup[Theta_s])\n"
      "          ; (copy[S] * copy[Theta_s] * id[Theta_s])\n"
      "          ; (id[S] * sym[S, Theta_s] * id[Theta_s] * id[Theta_s])\n"
      "          ; (Policy * id[S] * id[Theta_s] * id[Theta_s])\n"
      "          ; (copy[A] * id[S] * id[Theta_s] * id[Theta_s])\n"
      "          ; (id[A] * sym[A, S] * id[Theta_s] * id[Theta_s])\n"
      "          ; (id[A] * EnvInteraction * id[Theta_s] * id[Theta_s])\n"
      "          ; (id[A] * sym[E, Theta_s] * id[Theta_s])\n"
      "          ; (id[A] * Update * id[Theta_s])\n"
      "          ; (id[A] * cap[Theta_s]);\n"
      "}\n";
  Architecture a = parse_architecture(text);
  CHECK(og_equal(a.pattern.diagram, builtin("RL").pattern.diagram));
}

TEST_CASE("diagram literals parse, resolve and survive rendering") {
  const std::string text =
      "architecture Lit {\n"
      "  syntax {\n"
      "    types { S; T; }\n"
      "    generators { G : S -> T; }\n"
      "  }\n"
      "  pattern = diagram {\n"
      "    wires { a : S; b : T; }\n"
      "    in = (a);\n"
      "    out = (b, b);\n"
      "    edges { G(a) -> (b); }\n"
      "  };\n"
      "}\n";
  Architecture a = parse_architecture(text);
  CHECK(a.pattern.diagram.boundary_out.size() == 2);
  CHECK(a.pattern.diagram.edges.size() == 1);

  std::string rendered = render_architecture(a);
  Architecture again = parse_architecture(rendered);
  CHECK(og_equal(a.pattern.diagram, again.pattern.diagram));

  // a literal whose edge uses an undeclared generator fails with a position
  const std::string bad =
      "architecture Lit {\n"
      "  syntax { types { S; } }\n"
      "  pattern = diagram {\n"
      "    wires { a : S; }\n"
      "    in = (a);\n"
      "    out = (a);\n"
      "    edges { Ghost(a) -> (a); }\n"
      "  };\n"
      "}\n";
  CHECK_THROWS_AS(parse_architecture(bad), SyntaxError);
}

TEST_CASE("morphism files reject mismatched endpoints at resolution") {
  const std::string& text = corpus_sources().at("corpus/rl_to_crl.morph");
  MorphismFile file = parse_morphism_file(text, "rl_to_crl");
  CHECK(file.source == "RL");
  CHECK(file.target == "CRL");
  CHECK_THROWS_AS(resolve_morphism(file, builtin("CRL"), builtin("CRL")), Error);
}

#include <algorithm>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "agentarch/diagram.hpp"
#include "agentarch/errors.hpp"
#include "helpers.hpp"

using namespace agentarch;
using testutil::law_generators;
using testutil::random_diagram;

namespace {

const GeneratorSymbol& gen_named(const std::string& name) {
  for (const GeneratorSymbol& g : law_generators())
    if (g.name == name) return g;
  throw std::runtime_error("no test generator " + name);
}

// Rebuild d with wires and edges renumbered by the given permutations.
OpenHypergraph relabel(const OpenHypergraph& d, const std::vector<int>& wire_perm,
                       const std::vector<int>& edge_perm) {
  OpenHypergraph out;
  out.wires.resize(d.wires.size());
  for (std::size_t w = 0; w < d.wires.size(); ++w)
    out.wires[static_cast<std::size_t>(wire_perm[w])] = d.wires[w];
  out.edges.resize(d.edges.size());
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    DiagramEdge copy = d.edges[e];
    for (WireId& w : copy.in_ports) w = wire_perm[static_cast<std::size_t>(w)];
    for (WireId& w : copy.out_ports) w = wire_perm[static_cast<std::size_t>(w)];
    out.edges[static_cast<std::size_t>(edge_perm[e])] = std::move(copy);
  }
  for (WireId w : d.boundary_in) out.boundary_in.push_back(wire_perm[static_cast<std::size_t>(w)]);
  for (WireId w : d.boundary_out)
    out.boundary_out.push_back(wire_perm[static_cast<std::size_t>(w)]);
  out.check();
  return out;
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)],
                                            p[static_cast<std::size_t>(rng.below(i + 1))]);
  return p;
}

}  // namespace

TEST_CASE("identity diagrams expose the given boundary profile") {
  TypeProfile p = {{"X"}, {"Y"}, {"X"}};
  OpenHypergraph id = og_identity(p);
  CHECK(id.boundary_in_types() == p);
  CHECK(id.boundary_out_types() == p);
  CHECK(id.edges.empty());
  CHECK(id.wires.size() == 3);

  OpenHypergraph empty = og_identity({});
  CHECK(empty.wires.empty());
  CHECK(empty.boundary_in.empty());
  CHECK(empty.boundary_out.empty());
}

TEST_CASE("spiders have the declared leg counts on a single wire") {
  OpenHypergraph copy = og_spider({"X"}, 1, 2);
  CHECK(copy.wires.size() == 1);
  CHECK(copy.boundary_in.size() == 1);
  CHECK(copy.boundary_out.size() == 2);

  OpenHypergraph cap = og_spider({"X"}, 2, 0);
  CHECK(cap.boundary_in.size() == 2);
  CHECK(cap.boundary_out.empty());
}

TEST_CASE("composition glues boundaries positionwise") {
  OpenHypergraph f = og_generator(gen_named("f"));  // X -> Y
  OpenHypergraph g = og_generator(gen_named("g"));  // Y -> Z
  OpenHypergraph fg = og_compose(f, g);
  CHECK(fg.boundary_in_types() == TypeProfile{{"X"}});
  CHECK(fg.boundary_out_types() == TypeProfile{{"Z"}});
  CHECK(fg.edges.size() == 2);
  CHECK(fg.wires.size() == 3);  // X, shared Y, Z
}

TEST_CASE("composition rejects mismatched boundary profiles") {
  OpenHypergraph f = og_generator(gen_named("f"));  // X -> Y
  try {
    og_compose(f, f);  // Y out against X in
    FAIL("expected a boundary mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == "BoundaryTypeMismatch");
    CHECK(std::string(e.what()).find("0") != std::string::npos);  // offending position
  }
}

TEST_CASE("tensor concatenates boundaries and is associative with empty unit") {
  OpenHypergraph f = og_generator(gen_named("f"));
  OpenHypergraph g = og_generator(gen_named("g"));
  OpenHypergraph h = og_generator(gen_named("h"));

  OpenHypergraph fg = og_tensor(f, g);
  CHECK(fg.boundary_in_types() == TypeProfile{{"X"}, {"Y"}});
  CHECK(fg.boundary_out_types() == TypeProfile{{"Y"}, {"Z"}});

  CHECK(og_equal(og_tensor(og_tensor(f, g), h), og_tensor(f, og_tensor(g, h))));
  OpenHypergraph unit = og_identity({});
  CHECK(og_equal(og_tensor(unit, f), f));
  CHECK(og_equal(og_tensor(f, unit), f));
}

TEST_CASE("category laws hold on random composable triples") {
  Rng rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    OpenHypergraph f = random_diagram(rng, 4);
    TypeProfile mid1 = f.boundary_out_types();
    OpenHypergraph g = random_diagram(rng, 4, &mid1);
    TypeProfile mid2 = g.boundary_out_types();
    OpenHypergraph h = random_diagram(rng, 4, &mid2);

    CAPTURE(trial);
    CHECK(og_equal(og_compose(og_compose(f, g), h), og_compose(f, og_compose(g, h))));
    CHECK(og_equal(og_compose(og_identity(f.boundary_in_types()), f), f));
    CHECK(og_equal(og_compose(f, og_identity(f.boundary_out_types())), f));
    CHECK(og_equal(f, f));
  }
}

TEST_CASE("interchange law holds on random composable squares") {
  Rng rng(202);
  for (int trial = 0; trial < 120; ++trial) {
    OpenHypergraph f1 = random_diagram(rng, 3);
    OpenHypergraph f2 = random_diagram(rng, 3);
    TypeProfile m1 = f1.boundary_out_types();
    TypeProfile m2 = f2.boundary_out_types();
    OpenHypergraph g1 = random_diagram(rng, 3, &m1);
    OpenHypergraph g2 = random_diagram(rng, 3, &m2);

    CAPTURE(trial);
    CHECK(og_equal(og_compose(og_tensor(f1, f2), og_tensor(g1, g2)),
                   og_tensor(og_compose(f1, g1), og_compose(f2, g2))));
  }
}

TEST_CASE("symmetry is natural and self-inverse") {
  Rng rng(303);
  for (int trial = 0; trial < 60; ++trial) {
    OpenHypergraph f = random_diagram(rng, 3);
    OpenHypergraph g = random_diagram(rng, 3);
    TypeProfile p = f.boundary_in_types(), p2 = f.boundary_out_types();
    TypeProfile q = g.boundary_in_types(), q2 = g.boundary_out_types();

    CAPTURE(trial);
    // (f * g) ; sym == sym ; (g * f)
    CHECK(og_equal(og_compose(og_tensor(f, g), og_symmetry(p2, q2)),
                   og_compose(og_symmetry(p, q), og_tensor(g, f))));
    // sym ; sym == id
    CHECK(og_equal(og_compose(og_symmetry(p, q), og_symmetry(q, p)),
                   og_identity(p.empty() && q.empty() ? TypeProfile{} : [&] {
                     TypeProfile pq = p;
                     pq.insert(pq.end(), q.begin(), q.end());
                     return pq;
                   }())));
  }
}

TEST_CASE("spider laws: special Frobenius structure on one wire") {
  TypeSymbol t{"X"};
  OpenHypergraph id = og_identity({t});
  OpenHypergraph copy = og_spider(t, 1, 2);
  OpenHypergraph merge = og_spider(t, 2, 1);
  OpenHypergraph unit = og_spider(t, 0, 1);
  OpenHypergraph counit = og_spider(t, 1, 0);
  OpenHypergraph cap = og_spider(t, 2, 0);
  OpenHypergraph cup = og_spider(t, 0, 2);

  // copy is coassociative and cocommutative with counit law
  CHECK(og_equal(og_compose(copy, og_tensor(copy, id)), og_compose(copy, og_tensor(id, copy))));
  CHECK(og_equal(og_compose(copy, og_symmetry({t}, {t})), copy));
  CHECK(og_equal(og_compose(copy, og_tensor(id, counit)), id));
  CHECK(og_equal(og_compose(copy, og_tensor(counit, id)), id));

  // merge is associative and commutative with unit law
  CHECK(og_equal(og_compose(og_tensor(merge, id), merge), og_compose(og_tensor(id, merge), merge)));
  CHECK(og_equal(og_compose(og_symmetry({t}, {t}), merge), merge));
  CHECK(og_equal(og_compose(og_tensor(unit, id), merge), id));

  // special law and spider fusion
  CHECK(og_equal(og_compose(copy, merge), id));
  CHECK(og_equal(og_compose(copy, og_tensor(id, copy)), og_spider(t, 1, 3)));
  CHECK(og_equal(og_compose(og_tensor(merge, id), merge), og_spider(t, 3, 1)));

  // compact-closed snake equations via cap/cup
  CHECK(og_equal(og_compose(og_tensor(id, cup), og_tensor(cap, id)), id));
  CHECK(og_equal(og_compose(og_tensor(cup, id), og_tensor(id, cap)), id));

  // unit ; counit is a closed floating wire
  CHECK(og_equal(og_compose(unit, counit), og_spider(t, 0, 0)));
}

TEST_CASE("canonicalization is idempotent and invariant under relabeling") {
  Rng rng(404);
  for (int trial = 0; trial < 150; ++trial) {
    OpenHypergraph d = random_diagram(rng, 6);
    CanonicalForm c1 = og_canonical(d);
    CanonicalForm c2 = og_canonical(c1.diagram);
    CAPTURE(trial);
    CHECK(c1.certificate == c2.certificate);
    CHECK(og_equal(c1.diagram, d));

    std::vector<int> wp = random_permutation(static_cast<int>(d.wires.size()), rng);
    std::vector<int> ep = random_permutation(static_cast<int>(d.edges.size()), rng);
    OpenHypergraph shuffled = relabel(d, wp, ep);
    CHECK(og_equal(d, shuffled));
    CHECK(og_canonical(shuffled).certificate == c1.certificate);
  }
}

TEST_CASE("og_equal distinguishes structurally different diagrams") {
  OpenHypergraph f = og_generator(gen_named("f"));
  OpenHypergraph g = og_generator(gen_named("g"));
  CHECK_FALSE(og_equal(f, g));
  CHECK_FALSE(og_equal(og_identity({{"X"}}), og_identity({{"Y"}})));
  CHECK_FALSE(og_equal(og_spider({"X"}, 1, 2), og_spider({"X"}, 2, 1)));
  // the twist on X * X is not the identity
  CHECK_FALSE(og_equal(og_symmetry({{"X"}}, {{"X"}}), og_identity({{"X"}, {"X"}})));
  // boundary order matters
  OpenHypergraph two_in;
  two_in.wires = {{"X"}, {"Y"}};
  two_in.boundary_in = {0, 1};
  OpenHypergraph two_in_swapped;
  two_in_swapped.wires = {{"X"}, {"Y"}};
  two_in_swapped.boundary_in = {1, 0};
  CHECK_FALSE(og_equal(two_in, two_in_swapped));
}

TEST_CASE("wire identification glues and fuses") {
  OpenHypergraph d;
  d.wires = {{"X"}, {"X"}};
  d.boundary_in = {0};
  d.boundary_out = {1};
  OpenHypergraph glued = og_identify_wires(d, {{0, 1}});
  CHECK(og_equal(glued, og_identity({{"X"}})));

  // identifying a copy's legs produces the (1,1) spider on a shared wire: id
  OpenHypergraph copy = og_spider({"X"}, 1, 2);
  OpenHypergraph self = og_identify_wires(copy, {{0, 0}});
  CHECK(og_equal(self, copy));  // no-op identification
}

TEST_CASE("loop counting attributes only endomorphic cycles") {
  GeneratorSymbol u{"u", {{"X"}}, {{"X"}}};
  GeneratorSymbol u2{"u2", {{"X"}}, {{"X"}}};
  GeneratorSymbol fxy{"fxy", {{"X"}}, {{"Y"}}};
  GeneratorSymbol gyx{"gyx", {{"Y"}}, {{"X"}}};

  SUBCASE("self-loop on the carrier counts once") {
    OpenHypergraph d;
    d.wires = {{"X"}};
    d.edges = {{u, {0}, {0}}};
    LoopReport r = og_loop_carriers(d, {{"X"}});
    CHECK(r.cycle_count_per_carrier.at({"X"}) == 1);
    CHECK(r.carriers_on_cycles == std::vector<TypeSymbol>{{"X"}});
  }

  SUBCASE("two-edge cycle through same-typed wires counts once") {
    OpenHypergraph d;
    d.wires = {{"X"}, {"X"}};
    d.edges = {{u, {0}, {1}}, {u2, {1}, {0}}};
    LoopReport r = og_loop_carriers(d, {{"X"}});
    CHECK(r.cycle_count_per_carrier.at({"X"}) == 1);
  }

  SUBCASE("mixed-type cycles belong to no carrier") {
    OpenHypergraph d;
    d.wires = {{"X"}, {"Y"}};
    d.edges = {{fxy, {0}, {1}}, {gyx, {1}, {0}}};
    LoopReport r = og_loop_carriers(d, {{"X"}, {"Y"}});
    CHECK(r.cycle_count_per_carrier.at({"X"}) == 0);
    CHECK(r.cycle_count_per_carrier.at({"Y"}) == 0);
    CHECK(r.carriers_on_cycles.empty());
  }

  SUBCASE("parallel self-loops count separately") {
    OpenHypergraph d;
    d.wires = {{"X"}};
    d.edges = {{u, {0}, {0}}, {u2, {0}, {0}}};
    LoopReport r = og_loop_carriers(d, {{"X"}});
    CHECK(r.cycle_count_per_carrier.at({"X"}) == 2);
  }

  SUBCASE("acyclic chain has no loops") {
    OpenHypergraph d = og_compose(og_generator(gen_named("f")), og_generator(gen_named("g")));
    LoopReport r = og_loop_carriers(d, {{"X"}, {"Y"}, {"Z"}});
    CHECK(r.carriers_on_cycles.empty());
  }
}

TEST_CASE("check rejects malformed structures") {
  SUBCASE("port out of range") {
    OpenHypergraph d;
    d.wires = {{"X"}};
    d.edges = {{gen_named("f"), {5}, {0}}};
    CHECK_THROWS_AS(d.check(), Error);
  }
  SUBCASE("port type does not match the label") {
    OpenHypergraph d;
    d.wires = {{"Z"}, {"Y"}};
    d.edges = {{gen_named("f"), {0}, {1}}};  // f : X -> Y but port 0 is Z
    CHECK_THROWS_AS(d.check(), Error);
  }
  SUBCASE("boundary out of range") {
    OpenHypergraph d;
    d.wires = {{"X"}};
    d.boundary_in = {2};
    CHECK_THROWS_AS(d.check(), Error);
  }
}

TEST_CASE("dot rendering mentions every edge label") {
  OpenHypergraph d = og_compose(og_generator(gen_named("f")), og_generator(gen_named("g")));
  std::string dot = og_to_dot(d, "demo");
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("\"f\"") != std::string::npos);
  CHECK(dot.find("\"g\"") != std::string::npos);
}

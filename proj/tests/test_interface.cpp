#include <vector>

#include "doctest.h"

#include "agentarch/corpus.hpp"
#include "agentarch/errors.hpp"
#include "agentarch/interface.hpp"
#include "helpers.hpp"

using namespace agentarch;

TEST_CASE("pair_supported reflects the declared pairs") {
  const Architecture& rl = builtin("RL");
  CHECK(rl.iface.pair_supported({"Theta_s"}, {"Theta_k"}));
  CHECK(rl.iface.pair_supported({"E"}, {"E_k"}));
  CHECK_FALSE(rl.iface.pair_supported({"S"}, {"Theta_k"}));
  CHECK_FALSE(rl.iface.pair_supported({"Theta_s"}, {"E_k"}));
}

TEST_CASE("support extends to tensors existentially") {
  const Architecture& rl = builtin("RL");
  CHECK(support_lookup(rl, {{"Theta_s"}}, {"Theta_k"}));
  CHECK(support_lookup(rl, {{"S"}, {"Theta_s"}}, {"Theta_k"}));
  CHECK(support_lookup(rl, {{"S"}, {"A"}, {"E"}}, {"E_k"}));
  CHECK_FALSE(support_lookup(rl, {{"S"}, {"A"}}, {"Theta_k"}));
  CHECK_FALSE(support_lookup(rl, {}, {"Theta_k"}));  // empty tensor supports nothing
  CHECK_THROWS_AS(support_lookup(rl, {{"Nope"}}, {"Theta_k"}), Error);
  CHECK_THROWS_AS(support_lookup(rl, {{"S"}}, {"Nope"}), Error);
}

TEST_CASE("generator partition: compatible needs support on both sides") {
  SUBCASE("RL") {
    GeneratorPartition part = knowledge_compatible_generators(builtin("RL"));
    CHECK(part.compatible == std::vector<std::string>{"Update"});
    CHECK(part.agnostic == std::vector<std::string>{"Policy", "EnvInteraction"});
  }
  SUBCASE("CRL") {
    GeneratorPartition part = knowledge_compatible_generators(builtin("CRL"));
    CHECK(part.compatible == std::vector<std::string>{"Do", "PolicyUpdate", "CausalUpdate"});
    CHECK(part.agnostic == std::vector<std::string>{"Policy", "EnvInteraction"});
  }
  SUBCASE("SBL") {
    GeneratorPartition part = knowledge_compatible_generators(builtin("SBL"));
    CHECK(part.compatible == std::vector<std::string>{"CogModActivate", "CogModExec", "AggMem",
                                                      "UpdateSchemas", "AggSchemas"});
    CHECK(part.agnostic == std::vector<std::string>{"PerceptInst", "MotorInst", "EnvInteraction"});
  }
  SUBCASE("AIXI") {
    GeneratorPartition part = knowledge_compatible_generators(builtin("AIXI"));
    CHECK(part.compatible == std::vector<std::string>{"InitEnvKernel", "UpdateHistory"});
    CHECK(part.agnostic == std::vector<std::string>{"Policy", "EnvInteraction"});
  }
}

TEST_CASE("support tables render to the recorded fixed-width matrices") {
  CHECK(render_support_table(builtin("RL")) ==
        testutil::read_file(testutil::src_path("tests/golden/support_rl.txt")));
  CHECK(render_support_table(builtin("CRL")) ==
        testutil::read_file(testutil::src_path("tests/golden/support_crl.txt")));
  CHECK(render_support_table(builtin("SBL")) ==
        testutil::read_file(testutil::src_path("tests/golden/support_sbl.txt")));
  CHECK(render_support_table(builtin("AIXI")) ==
        testutil::read_file(testutil::src_path("tests/golden/support_aixi.txt")));
}

TEST_CASE("modularity report counts pairs and carrier rows") {
  ModularityReport rl = modularity_report(builtin("RL"));
  CHECK(rl.supported_pairs == 2);
  CHECK(rl.knowledge_carrier_types == 2);
  CHECK(rl.support_table == render_support_table(builtin("RL")));

  ModularityReport sbl = modularity_report(builtin("SBL"));
  CHECK(sbl.supported_pairs == 7);
  CHECK(sbl.knowledge_carrier_types == 7);

  ModularityReport aixi = modularity_report(builtin("AIXI"));
  CHECK(aixi.supported_pairs == 2);
  CHECK(aixi.knowledge_carrier_types == 2);
}

TEST_CASE("bindings designate knowledge diagrams for compatible generators") {
  const Architecture& rl = builtin("RL");
  REQUIRE(rl.iface.bindings.count("Update") == 1);
  const OpenHypergraph& upd = rl.iface.bindings.at("Update");
  CHECK(upd.boundary_in_types() == TypeProfile{{"Theta_k"}, {"E_k"}});
  CHECK(upd.boundary_out_types() == TypeProfile{{"Theta_k"}});

  // the causal architecture binds its policy update with the carrier slots
  // declared in the opposite order; binding acceptance is order-free on the
  // supported-partner multiset, so this still validates
  const Architecture& crl = builtin("CRL");
  REQUIRE(crl.iface.bindings.count("PolicyUpdate") == 1);
  CHECK(crl.iface.bindings.at("PolicyUpdate").boundary_in_types() ==
        TypeProfile{{"Theta_CS_k"}, {"Theta_pi_k"}, {"E_k"}});
  CHECK(arch_validate(crl).ok());
}

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rescomp/composite.hpp"
#include "rescomp/laws.hpp"

using namespace rescomp;

namespace {

LocalTheory incoherent_qubit() { return {FreeStateSet::incoherent(2), FreeOpClass::sio()}; }

}  // namespace

TEST(Fmin, ProductAndMixtureElements) {
  const auto x = pauli_x_channel();
  const auto dep = dephasing_channel(2);
  const auto prod = fmin_element({x, dep});
  EXPECT_EQ(prod.in_structure().size(), 2u);
  const Matrix in = kron(basis_projector(2, 0), plus_state().matrix());
  EXPECT_LT((prod.apply(in) - kron(basis_projector(2, 1), maximally_mixed(2).matrix())).norm(), 1e-14);
  const auto mix = fmin_element({{x, dep}, {dep, x}}, {0.5, 0.5});
  EXPECT_LT(mix.trace_preservation_defect(), 1e-12);
  EXPECT_THROW(fmin_element({{x, dep}, {dep, x}}, {0.5}), std::invalid_argument);
}

TEST(Fmin, RandomElementsPreserveSmin) {
  Rng rng(50);
  const std::vector<LocalTheory> locals{incoherent_qubit(), incoherent_qubit()};
  const auto smin_set = smin({locals[0].states, locals[1].states});
  for (int t = 0; t < 20; ++t) {
    const auto ch = random_fmin_element(locals, rng);
    const Matrix mu = random_free_state(smin_set, rng);
    EXPECT_TRUE(contains(smin_set, ch.apply(mu)));
  }
}

TEST(MeasurePrepare, OutputsLandInTargetSet) {
  Rng rng(51);
  const auto sep = FreeStateSet::separable(TensorStructure({{"A", 2}, {"B", 2}}));
  const auto target = smin({FreeStateSet::incoherent(2), sep});
  for (int t = 0; t < 5; ++t) {
    const auto ch = random_measure_prepare(target.structure(), target, rng, 3);
    const Matrix out = ch.apply(random_density(8, rng));
    EXPECT_TRUE(contains(target, out));
    EXPECT_LT(ch.trace_preservation_defect(), 1e-9);
  }
}

TEST(Axioms, IncoherentCompositeSatisfiesAll) {
  const std::vector<LocalTheory> locals{incoherent_qubit(), incoherent_qubit()};
  const auto candidate = smin({locals[0].states, locals[1].states});
  AxiomOptions o;
  o.state_samples = 40;
  o.channel_samples = 10;
  const auto r = check_axioms(candidate, {}, locals, o);
  EXPECT_TRUE(r.passed());
  for (const char* name : {"product_states", "product_operations", "marginal_states", "marginal_operations"})
    EXPECT_NO_THROW(r.get(name));
  EXPECT_THROW(r.get("nonexistent"), std::out_of_range);
}

TEST(Axioms, EntangledCandidateFailsMarginalStatesForSingletons) {
  // Locals {I/2} with unital operations; Phi+ has maximally mixed marginals
  // and should pass, |00> should not.
  const LocalTheory unital{FreeStateSet::singleton(maximally_mixed(2)), FreeOpClass::unital()};
  const auto bad = FreeStateSet::hull({basis_projector(4, 0), maximally_mixed(4).matrix()});
  AxiomOptions o;
  o.state_samples = 20;
  o.channel_samples = 5;
  const auto r = check_axioms(bad, {}, {unital, unital}, o);
  EXPECT_FALSE(r.get("marginal_states").passed);
  EXPECT_TRUE(r.get("marginal_states").counterexample_state.has_value());
}

TEST(Axioms, ResetMapFailsMarginalOperations) {
  const LocalTheory unital{FreeStateSet::singleton(maximally_mixed(2)), FreeOpClass::unital()};
  const auto candidate = smax({unital.states, unital.states});
  AxiomOptions o;
  o.state_samples = 20;
  o.channel_samples = 5;
  const auto r = check_axioms(candidate, {reset_to_zero_map()}, {unital, unital}, o);
  EXPECT_FALSE(r.get("marginal_operations").passed);
}

TEST(Sandwich, BothInclusionsForIncoherentLocals) {
  const auto inc = FreeStateSet::incoherent(2);
  AxiomOptions o;
  o.state_samples = 30;
  EXPECT_TRUE(check_sandwich(smin({inc, inc}), {inc, inc}, o).passed());
  EXPECT_TRUE(check_sandwich(smax({inc, inc}), {inc, inc}, o).passed());
  // All two-qubit states overshoot smax.
  const auto all = FreeStateSet::all_states(4);
  EXPECT_FALSE(check_sandwich(all, {inc, inc}, o).upper.passed);
}

TEST(BpAxioms, ViolationFamilyFailsTensorClosure) {
  AxiomOptions o;
  o.state_samples = 50;
  const auto r = check_bp_axioms(bp_violation_family(), 2, o);
  const auto& tc = r.get("tensor_closure");
  EXPECT_FALSE(tc.passed);
  ASSERT_TRUE(tc.counterexample_state.has_value());
  const Matrix phi = maximally_entangled().matrix();
  EXPECT_LT((*tc.counterexample_state - kron(phi, phi)).norm(), 1e-12);
  EXPECT_TRUE(r.get("convexity").passed);
  EXPECT_TRUE(r.get("full_rank").passed);
  EXPECT_FALSE(r.passed());
}

TEST(BpAxioms, IncoherentFamilyPasses) {
  SetFamily fam;
  const auto inc = FreeStateSet::incoherent(2);
  fam.emplace(1, inc);
  fam.emplace(2, FreeStateSet::incoherent(4));
  AxiomOptions o;
  o.state_samples = 30;
  EXPECT_TRUE(check_bp_axioms(fam, 2, o).passed());
  EXPECT_THROW(check_bp_axioms(fam, 4, o), std::invalid_argument);
}

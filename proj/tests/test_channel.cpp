#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rescomp/channel.hpp"

using namespace rescomp;

namespace {

// Lambda(X) = Tr_in[(X^T (x) I) J] with the input factor first.
Matrix apply_via_choi(const Matrix& choi, const Matrix& x, int din, int dout) {
  Matrix out = Matrix::Zero(dout, dout);
  for (int a = 0; a < din; ++a)
    for (int b = 0; b < din; ++b) out += x(a, b) * choi.block(a * dout, b * dout, dout, dout);
  return out;
}

KrausChannel amplitude_damping(double g) {
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - g);
  k1(0, 1) = std::sqrt(g);
  return KrausChannel({k0, k1}, TensorStructure::single(2), TensorStructure::single(2));
}

}  // namespace

TEST(KrausChannel, RejectsNonTracePreserving) {
  Matrix k = identity(2) * 0.9;
  EXPECT_THROW(KrausChannel({k}, TensorStructure::single(2), TensorStructure::single(2)), std::invalid_argument);
  EXPECT_THROW(KrausChannel({}, TensorStructure::single(2), TensorStructure::single(2)), std::invalid_argument);
  EXPECT_THROW(KrausChannel({identity(3)}, TensorStructure::single(2), TensorStructure::single(2)),
               std::invalid_argument);
}

TEST(KrausChannel, ApplyMatchesChoiAndAdjoint) {
  Rng rng(12);
  const auto ch = amplitude_damping(0.3);
  const Matrix j = ch.choi();
  for (int t = 0; t < 5; ++t) {
    const Matrix x = random_density(2, rng);
    const Matrix y = random_hermitian(2, rng);
    EXPECT_LT((ch.apply(x) - apply_via_choi(j, x, 2, 2)).norm(), 1e-13);
    // Duality Tr(Y Lambda(X)) = Tr(Lambda^dagger(Y) X).
    EXPECT_NEAR(trace_product(y, ch.apply(x)), trace_product(ch.apply_adjoint(y), x), 1e-13);
  }
  EXPECT_NEAR(oracle::trace_second(j, 2, 2).trace().real(), 2.0, 1e-13);
  EXPECT_LT(ch.trace_preservation_defect(), 1e-14);
}

TEST(KrausChannel, FromChoiRoundTrip) {
  Rng rng(13);
  const auto ch = mixture({amplitude_damping(0.4), KrausChannel::unitary(random_unitary(2, rng), TensorStructure::single(2))},
                          {0.5, 0.5});
  const auto back = from_choi(ch.choi(), ch.in_structure(), ch.out_structure());
  EXPECT_LT((back.choi() - ch.choi()).norm(), 1e-10);
  EXPECT_LE(back.kraus().size(), 4u);
}

TEST(KrausChannel, FromLinearMapReproducesAction) {
  const TensorStructure s = TensorStructure::single(2);
  const auto dep = from_linear_map([](const Matrix& x) { return dephase(x); }, s, s);
  EXPECT_LT((dep.choi() - dephasing_channel(2).choi()).norm(), 1e-12);
  EXPECT_THROW(from_linear_map([](const Matrix& x) { return Matrix(x.transpose()); }, s, s), std::invalid_argument);
}

TEST(KrausChannel, ReplacementAndIdentity) {
  Rng rng(14);
  const auto target = DensityOperator(random_density(3, rng));
  const auto rep = KrausChannel::replacement(TensorStructure::single(2), target);
  EXPECT_LT((rep.apply(random_density(2, rng)) - target.matrix()).norm(), 1e-12);
  const auto id = KrausChannel::identity(TensorStructure({{"A", 2}, {"B", 2}}));
  const Matrix x = random_density(4, rng);
  EXPECT_LT((id.apply(x) - x).norm(), 1e-15);
}

TEST(Composition, OrderAndTensor) {
  const auto x = pauli_x_channel();
  const auto dep = dephasing_channel(2);
  const Matrix plus = plus_state().matrix();
  EXPECT_LT((compose(dep, x).apply(plus) - dep.apply(x.apply(plus))).norm(), 1e-15);
  const auto ad = amplitude_damping(1.0);
  // Damping after X sends |0> to |0>; X after damping sends it to |1>.
  EXPECT_NEAR(compose(ad, x).apply(basis_projector(2, 0))(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(compose(x, ad).apply(basis_projector(2, 0))(1, 1).real(), 1.0, 1e-14);
  EXPECT_THROW(tensor(x, dep), std::invalid_argument);
  const auto t = tensor(KrausChannel::unitary(pauli_x(), TensorStructure::single(2, "a")), dep);
  Rng rng(15);
  const Matrix a = random_density(2, rng), b = random_density(2, rng);
  EXPECT_LT((t.apply(Matrix(kron(a, b))) - kron(x.apply(a), dep.apply(b))).norm(), 1e-14);
}

TEST(Mixture, WeightsAndValidation) {
  const auto m = mixture({pauli_x_channel(), KrausChannel::identity(TensorStructure::single(2))}, {0.25, 0.75});
  const Matrix out = m.apply(basis_projector(2, 0));
  EXPECT_NEAR(out(1, 1).real(), 0.25, 1e-14);
  EXPECT_THROW(mixture({pauli_x_channel()}, {0.5}), std::invalid_argument);
}

TEST(Unitality, DefectsOfStandardChannels) {
  EXPECT_TRUE(is_unital(dephasing_channel(3)));
  EXPECT_TRUE(is_unital(pauli_x_channel()));
  EXPECT_FALSE(is_unital(amplitude_damping(0.5)));
  EXPECT_NEAR(unitality_defect(amplitude_damping(1.0)), 1.0, 1e-13);
}

TEST(MarginalChannel, FrozenInputsAndTargetOutput) {
  const TensorStructure s({{"1", 2}, {"2", 2}});
  const auto swap = swap_channel(s, 0, 1);
  // Marginal on "1" of the swap, with "2" frozen in |1>, is the replacement by |1>.
  const auto m = marginal_channel(swap, "1", {{"2", DensityOperator(basis_projector(2, 1), TensorStructure::single(2, "2"))}});
  EXPECT_NEAR(m.apply(basis_projector(2, 0))(1, 1).real(), 1.0, 1e-14);
  const auto cm = choi_marginal_channel(swap, "1");
  EXPECT_LT((cm.apply(basis_projector(2, 0)) - maximally_mixed(2).matrix()).norm(), 1e-14);
  EXPECT_THROW(marginal_channel(swap, "1", {}), std::invalid_argument);
}

TEST(Povm, Validation) {
  Povm ok{{basis_projector(2, 0), basis_projector(2, 1)}};
  EXPECT_NO_THROW(ok.validate());
  Povm short_sum{{basis_projector(2, 0)}};
  EXPECT_THROW(short_sum.validate(), std::invalid_argument);
  Povm negative{{Matrix(pauli_z() + identity(2) * 0.5), Matrix(identity(2) * 0.5 - pauli_z())}};
  EXPECT_THROW(negative.validate(), std::invalid_argument);
}

namespace {

// A measures Z and B flips on outcome 1: copies the Z value of A onto B.
LfoccProtocol copy_protocol() {
  const TensorStructure s({{"A", 2}, {"B", 2}});
  LfoccRound r1{"A", {{"", {basis_projector(2, 0), basis_projector(2, 1)}}}};
  LfoccRound r2{"B", {{"0", {identity(2)}}, {"1", {pauli_x()}}}};
  return LfoccProtocol(s, {r1, r2});
}

}  // namespace

TEST(Lfocc, CompiledChannelCopiesClassicalValue) {
  const auto p = copy_protocol();
  EXPECT_EQ(p.histories(1), (std::vector<std::string>{"0", "1"}));
  const auto ch = compile_lfocc(p);
  const Matrix in = kron(plus_state().matrix(), basis_projector(2, 0));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 0.5;
  expected(3, 3) = 0.5;
  EXPECT_LT((ch.apply(in) - expected).norm(), 1e-14);
}

TEST(Lfocc, BranchSamplingFollowsBornRule) {
  const auto p = copy_protocol();
  Rng rng(16);
  const Matrix in = kron(plus_state().matrix(), basis_projector(2, 0));
  int ones = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const auto [state, h] = sample_lfocc_branch(p, in, rng);
    EXPECT_NEAR(state.trace().real(), 1.0, 1e-12);
    if (h.rfind("1", 0) == 0) {
      ++ones;
      EXPECT_NEAR(state(3, 3).real(), 1.0, 1e-12);
    }
  }
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 0.03);
}

TEST(Lfocc, RejectsMissingHistoryAndUnknownParty) {
  const TensorStructure s({{"A", 2}, {"B", 2}});
  LfoccRound r1{"A", {{"", {basis_projector(2, 0), basis_projector(2, 1)}}}};
  LfoccRound r2{"B", {{"0", {identity(2)}}}};
  EXPECT_THROW(LfoccProtocol(s, {r1, r2}), std::invalid_argument);
  LfoccRound bad{"C", {{"", {identity(2)}}}};
  EXPECT_THROW(LfoccProtocol(s, {bad}), std::invalid_argument);
}

TEST(EffectivePovm, SingleInputIsAdjoint) {
  const auto ad = amplitude_damping(0.2);
  const Matrix p = basis_projector(2, 1);
  EXPECT_LT((effective_povm(ad, p, ad.out_structure().labels()[0]) - ad.apply_adjoint(p)).norm(), 1e-14);
}

TEST(EffectivePovm, CopyProtocolMeasuresSenderInZ) {
  const auto ch = compile_lfocc(copy_protocol());
  const std::map<std::string, DensityOperator> aux{{"B", DensityOperator(basis_projector(2, 0), TensorStructure::single(2, "B"))}};
  const Matrix e = effective_povm(ch, basis_projector(2, 1), "B", "A", aux);
  EXPECT_LT((e - basis_projector(2, 1)).norm(), 1e-14);
}

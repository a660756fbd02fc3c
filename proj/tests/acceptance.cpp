// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rescomp/certify.hpp"
#include "rescomp/composite.hpp"
#include "rescomp/laws.hpp"

using namespace rescomp;

namespace {

constexpr double kFwTol = 1e-3;
constexpr double kExactTol = 1e-12;
constexpr double kMapTol = 1e-10;
constexpr double kNogoTol = 1e-9;
constexpr double kUnitalityTol = 1e-10;
constexpr double kPovmTol = 1e-10;
constexpr double kCaseTol = 1e-9;
constexpr double kPStarTol = 1e-6;
constexpr double kFloorTol = 1e-4;
constexpr double kCeilingSlack = 1e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const TensorStructure kAB({{"A", 2}, {"B", 2}});

Outcome criterion1() {
  const auto inc = FreeStateSet::incoherent(2);
  const auto closed = rel_entropy_of_resource(plus_state(), inc);
  RelEntropyOptions o;
  o.force_iterative = true;
  const auto fw = rel_entropy_of_resource(plus_state(), inc, o);
  const bool ok = closed.method == "closed-form" && std::abs(closed.value - 1.0) <= kExactTol &&
                  std::abs(fw.value - 1.0) <= kFwTol;
  return {ok, fmt("closed=%.15f iterative=%.6f gap=%.1e", closed.value, fw.value, fw.gap())};
}

Outcome criterion2() {
  RelEntropyOptions o;
  o.force_iterative = true;
  const auto r = rel_entropy_of_resource(maximally_entangled(), FreeStateSet::separable(kAB), o);
  const bool ok = std::abs(r.value - 1.0) <= kFwTol && r.converged && r.certified && r.gap() <= kFwTol;
  return {ok, fmt("value=%.6f lower=%.6f upper=%.6f", r.value, r.lower_bound, r.upper_bound) + " method=" + r.method};
}

FreeStateSet example_composite() {
  return smin({FreeStateSet::incoherent(2), FreeStateSet::separable(kAB)}, {"1", "AB"});
}

Outcome criterion3() {
  const auto lam = coherence_to_entanglement_map();
  const auto in = tensor(plus_state(), basis_state(4, 0).with_structure(kAB));
  const auto target = tensor(basis_state(2, 0), maximally_entangled());
  const double td = trace_norm_distance(lam.apply(in.matrix()), target.matrix());
  const auto chk = check_op_class(lam, FreeOpClass::rng(example_composite()), 1e-9, 3, 200);
  return {td <= kMapTol && chk.passed, fmt("trace_distance=%.2e", td) + " rng=" + chk.mode};
}

Outcome criterion4() {
  const auto set = example_composite();
  const auto inc = FreeStateSet::incoherent(2);
  const auto base = coherence_to_entanglement_map();
  const auto cls = FreeOpClass::rng(set);
  const Matrix probe = tensor(basis_state(2, 0), maximally_entangled()).matrix();
  Rng rng(404);
  int verified = 0, passed = 0;
  double worst = 0.0;
  const int n = 50;
  for (int k = 0; k < n; ++k) {
    KrausChannel ch = random_measure_prepare(set.structure(), set, rng, 2 + k % 3);
    if (k % 3 == 1) {
      const double w = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
      ch = mixture({base, ch}, {w, 1.0 - w});
    } else if (k % 3 == 2) {
      ch = compose(ch, base);
    }
    if (check_op_class(ch, cls, 1e-9, 404 + static_cast<uint64_t>(k), 100).passed) ++verified;
    const auto r = nogo_entanglement_to_coherence(ch, inc, kNogoTol);
    passed += r.passed ? 1 : 0;
    Matrix m = marginal(ch.apply(probe), ch.out_structure(), 0);
    m.diagonal().setZero();
    worst = std::max({worst, r.direct_offdiagonal, r.basis_offdiagonal, m.norm()});
  }
  return {verified == n && passed == n && worst <= kNogoTol,
          fmt("verified=%g certified=%g max_offdiag=%.1e", verified, passed, worst)};
}

Outcome criterion5() {
  const auto x = pauli_x_channel();
  const auto mixed = FreeStateSet::singleton(maximally_mixed(2));
  const auto hull = FreeStateSet::hull({maximally_mixed(2).matrix(), basis_projector(2, 0)});
  const auto prep = KrausChannel::replacement(TensorStructure::single(2), basis_state(2, 1));
  const bool a = check_op_class(x, FreeOpClass::rng(mixed)).passed;
  const bool b = !contains(hull, x.apply(basis_projector(2, 0)));
  const bool c = check_op_class(prep, FreeOpClass::rng(FreeStateSet::all_states(2))).passed;
  const auto zero = FreeStateSet::singleton(basis_state(2, 0));
  const bool d = !check_op_class(prep, FreeOpClass::rng(zero)).passed && !contains(zero, prep.apply(basis_projector(2, 0)));
  return {a && b && c && d, fmt("x_preserves_mixed=%g x_escapes_hull=%g", a, b) +
                                fmt(" prepare_preserves_all=%g prepare_escapes_zero=%g", c, d)};
}

Outcome criterion6() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix u = Matrix::Zero(4, 4);
  // (H x I) CNOT
  u << s, 0, 0, s, 0, s, s, 0, s, 0, 0, -s, 0, s, -s, 0;
  const TensorStructure st({{"1", 2}, {"2", 2}});
  const auto prep = KrausChannel::replacement(st, maximally_entangled(2, "1", "2"));
  const auto lam = compose(KrausChannel::unitary(u, st), prep);
  const auto m = marginal_channel(lam, "1", {{"2", maximally_mixed(2).with_structure(TensorStructure::single(2, "2"))}});
  const double defect = trace_norm(m.apply(identity(2) / 2.0) - identity(2) / 2.0);
  return {std::abs(defect - 1.0) <= kUnitalityTol && !is_unital(m), fmt("defect=%.12f", defect)};
}

Outcome criterion7() {
  const auto inc = FreeStateSet::incoherent(2);
  const auto lo = smin({inc, inc});
  const auto hi = smax({inc, inc});
  Rng rng(707);
  int ordered = 0;
  double worst = -kInfinity;
  for (int t = 0; t < 100; ++t) {
    const Matrix rho = random_density(4, rng);
    const auto dmin = rel_entropy_of_resource(rho, lo);
    const auto dmax_ = rel_entropy_of_resource(rho, hi);
    const double excess = dmax_.lower_bound - dmin.upper_bound;
    worst = std::max(worst, excess);
    if (excess <= 0.0 || dmax_.value <= dmin.value + dmin.gap() + dmax_.gap()) ++ordered;
  }
  const std::vector<LocalTheory> locals{{inc, FreeOpClass::sio()}, {inc, FreeOpClass::sio()}};
  int images = 0, inside = 0;
  for (int t = 0; t < 50; ++t) {
    const auto ch = random_fmin_element(locals, rng);
    for (int k = 0; k < 10; ++k, ++images) inside += contains(hi, ch.apply(random_free_state(lo, rng))) ? 1 : 0;
  }
  return {ordered == 100 && inside == images,
          fmt("ordered=%g/100 worst_excess=%.1e images_in_smax=%g", ordered, worst, inside)};
}

Outcome criterion8() {
  const auto inc = FreeStateSet::incoherent(2);
  Rng rng(808);
  int ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const DensityOperator r1(random_density(2, rng), TensorStructure::single(2, "1"));
    const DensityOperator m2(random_free_state(inc, rng), TensorStructure::single(2, "2"));
    const auto r = uncorrelated_reduction(tensor(r1, m2), {inc, inc}, 0);
    const double spread = std::abs(r.min_value.value - r.max_value.value);
    const double dev = std::max(std::abs(r.min_value.value - r.local.value), std::abs(r.max_value.value - r.local.value));
    worst = std::max(worst, dev);
    if (spread <= r.min_value.gap() + r.max_value.gap() + 1e-12 && dev <= kFwTol) ++ok;
  }
  return {ok == 50, fmt("consistent=%g/50 worst_deviation=%.1e", ok, worst)};
}

Outcome criterion9() {
  const auto set = smin({FreeStateSet::all_states(2), FreeStateSet::incoherent(2)});
  RelEntropyOptions o;
  o.force_iterative = true;
  Rng rng(909);
  int ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Vector psi = random_pure_vector(4, rng);
    const Matrix rho = psi * psi.adjoint();
    const auto r = rel_entropy_of_resource(rho, set, o);
    const Matrix rb = partial_trace(rho, kAB, {1});
    const double ref = von_neumann_entropy(dephase(rb));
    worst = std::max(worst, std::abs(r.value - ref));
    ok += std::abs(r.value - ref) <= kFwTol && r.method != "closed-form" ? 1 : 0;
  }
  return {ok == 50, fmt("matched=%g/50 worst=%.1e", ok, worst)};
}

Outcome criterion10() {
  AxiomOptions o;
  o.state_samples = 100;
  const auto r = check_bp_axioms(bp_violation_family(), 2, o);
  const auto& tc = r.get("tensor_closure");
  const Matrix phi = maximally_entangled().matrix();
  const bool witness = tc.counterexample_state && (*tc.counterexample_state - kron(phi, phi)).norm() <= 1e-12;
  return {!tc.passed && witness, "tensor_closure=" + std::string(tc.passed ? "held" : "violated") +
                                     (witness ? " witness=phi+xphi+" : " witness=other")};
}

Outcome criterion11() {
  Rng rng(1111);
  const auto cls = FreeOpClass::lfocc({{"A", FreeOpClass::sio()}, {"B", FreeOpClass::real_ops()}});
  const auto inc = FreeStateSet::incoherent(2);
  int diagonal = 0, capped = 0;
  double worst_off = 0.0, worst_excess = -kInfinity;
  for (int t = 0; t < 500; ++t) {
    const auto p = random_lfocc_protocol(kAB, cls, 1 + t % 3, rng);
    Matrix test = random_real_density(2, rng);
    test /= max_eigenvalue(test);
    const auto c = lfocc_ceiling(plus_state(), inc, p, test, 0.25, cls, Matrix(), 1111 + static_cast<uint64_t>(t));
    worst_off = std::max(worst_off, c.offdiagonal);
    diagonal += c.offdiagonal <= kPovmTol ? 1 : 0;
    const double excess = c.report.value - c.report.ceiling;
    worst_excess = std::max(worst_excess, excess);
    capped += excess <= kCeilingSlack ? 1 : 0;
  }
  return {diagonal == 500 && capped == 500,
          fmt("diagonal=%g/500 max_offdiag=%.1e max_excess=%.1e", diagonal, worst_off, worst_excess)};
}

Outcome criterion12() {
  const TensorStructure a = TensorStructure::single(2, "A");
  const auto inc = FreeStateSet::incoherent(2);
  const auto id = KrausChannel::identity(a);
  const auto rot = KrausChannel::unitary(rz(M_PI / 2), a);
  const Matrix p = (identity(2) - pauli_x()) / 2.0;
  const auto e = certification_errors(plus_y_state(), inc, rot, p);
  RemoteOptions ro;
  ro.tests = TestClass::Real;
  const auto with_rot = remote_certification(plus_y_state(), inc, {id, rot}, 0.5, ro);
  const auto plain = remote_certification(plus_y_state(), inc, {id}, 0.5, ro);
  const auto dh = hypothesis_testing(plus_y_state().matrix(), inc, 0.5);
  const bool ok = std::abs(e.alpha - 0.5) <= kCaseTol && e.beta <= kCaseTol && std::isinf(with_rot.value) &&
                  std::isinf(dh.value) && std::abs(plain.value - plain.floor) <= kFloorTol &&
                  std::abs(plain.floor - 1.0) <= kExactTol;
  return {ok, fmt("alpha=%.3g beta=%.1e plain=%.6f", e.alpha, e.beta, plain.value) +
                  (std::isinf(with_rot.value) ? " with_rotation=inf" : " with_rotation=finite")};
}

Outcome criterion13() {
  WitnessOptions o;
  o.samples = 1000;
  const auto w = witness_channel(plus_state(), FreeStateSet::incoherent(2), FreeStateSet::separable(kAB), o);
  const Matrix out = w.channel.apply(plus_state().matrix());
  const double npt = min_eigenvalue(partial_transpose(out, kAB, 1));
  Rng rng(1313);
  const auto inc = FreeStateSet::incoherent(2);
  int ppt = 0;
  for (int t = 0; t < 1000; ++t)
    ppt += min_eigenvalue(partial_transpose(w.channel.apply(random_free_state(inc, rng)), kAB, 1)) >= -1e-9 ? 1 : 0;
  const bool ok = std::abs(w.p_star - 2.0 / 3.0) <= kPStarTol && npt < 0 && ppt == 1000;
  return {ok, fmt("p*=%.9f ppt=%g/1000 rho_min_pt_eig=%.3e", w.p_star, ppt, npt)};
}

Outcome criterion14() {
  const auto inc = FreeStateSet::incoherent(3);
  Rng rng(1414);
  int ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Matrix rho = random_free_state(inc, rng);
    for (double eps : {0.1, 0.25, 0.5}) {
      const double dev = std::abs(hypothesis_testing(rho, inc, eps).value + std::log2(1.0 - eps));
      worst = std::max(worst, dev);
      ok += dev <= kFloorTol ? 1 : 0;
    }
  }
  return {ok == 60, fmt("at_floor=%g/60 worst=%.1e", ok, worst)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "coherence of |+>", 1.0, criterion1},
      {2, "entanglement of phi+", 30.0, criterion2},
      {3, "forward conversion map", 0, criterion3},
      {4, "reverse no-go, 50 sampled channels", 0, criterion4},
      {5, "RNG counterexamples", 0, criterion5},
      {6, "marginal of reset map is not unital", 0, criterion6},
      {7, "sandwich ordering and Fmin images", 0, criterion7},
      {8, "uncorrelated reduction", 0, criterion8},
      {9, "assisted distillation identity", 0, criterion9},
      {10, "BP tensor-closure violation", 0, criterion10},
      {11, "LFOCC certification ceiling", 0, criterion11},
      {12, "case-study saturation", 0, criterion12},
      {13, "witness channel", 0, criterion13},
      {14, "hypothesis-testing floor", 0, criterion14},
  };
  int failures = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0 && dt > c.budget_seconds) {
      o.pass = false;
      o.detail += fmt(" (over %.0f s budget)", c.budget_seconds);
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %2d  %-40s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, dt, o.detail.c_str());
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(all.size()) - failures, all.size(), total);
  return failures == 0 ? 0 : 1;
}

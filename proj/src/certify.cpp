#include "rescomp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rescomp {

Matrix rz(double theta) {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, -theta / 2.0);
  u(1, 1) = std::polar(1.0, theta / 2.0);
  return u;
}

DivergenceResult standard_certification(const DensityOperator& rho, const FreeStateSet& set, double epsilon,
                                        const HypothesisOptions& options) {
  return hypothesis_testing(rho.matrix(), set, epsilon, options);
}

KrausChannel induced_channel(const KrausChannel& preprocessing, int sender_dim, const Matrix& auxiliary) {
  if (preprocessing.in_dim() == sender_dim) return preprocessing;
  const auto& in = preprocessing.in_structure();
  const auto& out = preprocessing.out_structure();
  if (in.size() < 2 || in.dims().front() != sender_dim)
    throw std::invalid_argument("preprocessing input does not start with the sender's system");
  if (out.size() < 2) throw std::invalid_argument("two-party preprocessing needs a receiver output");
  const int rest = preprocessing.in_dim() / sender_dim;
  const Matrix aux = auxiliary.size() == 0 ? Matrix(identity(rest) / static_cast<double>(rest)) : auxiliary;
  if (aux.rows() != rest) throw std::invalid_argument("auxiliary state has the wrong dimension");
  std::vector<int> keep(out.size() - 1);
  for (size_t k = 0; k < keep.size(); ++k) keep[k] = static_cast<int>(k + 1);
  const auto map = [&](const Matrix& x) { return partial_trace(preprocessing.apply(Matrix(kron(x, aux))), out, keep); };
  return from_linear_map(map, TensorStructure::single(sender_dim, in.parties().front().label), out.subset(keep));
}

TestErrors certification_errors(const DensityOperator& rho_a, const FreeStateSet& s_a, const KrausChannel& preprocessing,
                                 const Matrix& test, const Matrix& auxiliary, uint64_t seed) {
  const auto ch = induced_channel(preprocessing, s_a.dim(), auxiliary);
  if (test.rows() != ch.out_dim()) throw std::invalid_argument("test does not act on the receiver output");
  TestErrors e;
  e.alpha = alpha_value(s_a, ch.apply_adjoint(test), seed);
  e.beta = 1.0 - trace_product(ch.apply(rho_a.matrix()), test);
  return e;
}

CertReport remote_certification(const DensityOperator& rho_a, const FreeStateSet& s_a,
                                const std::vector<KrausChannel>& family, double epsilon, const RemoteOptions& options) {
  if (family.empty()) throw std::invalid_argument("remote_certification: empty preprocessing family");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  CertReport r;
  r.floor = -std::log2(1.0 - epsilon);
  HypothesisOptions ceiling_opt;
  ceiling_opt.seed = options.seed;
  r.ceiling = hypothesis_testing(rho_a.matrix(), s_a, epsilon, ceiling_opt).value;

  HypothesisOptions opt;
  opt.tests = options.tests;
  opt.basis = options.basis;
  opt.seed = options.seed;
  r.value = -kInfinity;
  for (size_t k = 0; k < family.size(); ++k) {
    const auto ch = induced_channel(family[k], s_a.dim(), options.auxiliary);
    auto res = hypothesis_testing_through(rho_a.matrix(), s_a, ch, epsilon, opt);
    if (res.value > r.value) {
      r.value = res.value;
      r.achiever = static_cast<int>(k);
      r.test = res.optimizer;
      r.alpha = alpha_value(s_a, ch.apply_adjoint(res.optimizer), options.seed);
      r.beta = std::max(0.0, 1.0 - trace_product(ch.apply(rho_a.matrix()), res.optimizer));
    }
    r.per_channel.push_back(std::move(res));
  }
  if (r.value > r.ceiling + 1e-6) r.note = "family value exceeds the single-party ceiling";
  return r;
}

// --- LFOCC ---------------------------------------------------------------------

namespace {

const FreeOpClass& local_class(const FreeOpClass& classes, const std::string& party) {
  for (const auto& [label, c] : classes.locals)
    if (label == party) return c;
  throw std::invalid_argument("no local class for party '" + party + "'");
}

}  // namespace

LfoccProtocol random_lfocc_protocol(const TensorStructure& structure, const FreeOpClass& classes, int rounds, Rng& rng) {
  if (classes.kind != OpKind::Lfocc) throw std::invalid_argument("random_lfocc_protocol needs an LFOCC class");
  if (rounds < 1) throw std::invalid_argument("a protocol needs at least one round");
  std::vector<LfoccRound> out;
  std::vector<std::string> histories{""};
  for (int r = 0; r < rounds; ++r) {
    const auto& party = structure.parties()[static_cast<size_t>(r) % structure.size()];
    const auto& cls = local_class(classes, party.label);
    LfoccRound round{party.label, {}};
    std::vector<std::string> next;
    for (const auto& h : histories) {
      // Keep the branch count within the protocol limit.
      auto fam = random_free_op(cls, party.dim, rng).kraus();
      const size_t budget = std::max<size_t>(1, static_cast<size_t>(kMaxLfoccBranches) / histories.size());
      if (fam.size() > budget) fam = KrausChannel::identity(TensorStructure::single(party.dim)).kraus();
      for (size_t k = 0; k < fam.size(); ++k) next.push_back(extend_history(h, static_cast<int>(k)));
      round.branches[h] = std::move(fam);
    }
    histories = std::move(next);
    out.push_back(std::move(round));
  }
  return LfoccProtocol(structure, std::move(out));
}

LfoccCertification lfocc_ceiling(const DensityOperator& rho_a, const FreeStateSet& s_a, const LfoccProtocol& protocol,
                                 const Matrix& test, double epsilon, const FreeOpClass& classes, const Matrix& auxiliary,
                                 uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const auto check = check_protocol_class(protocol, classes);
  if (!check.passed) throw std::invalid_argument("protocol leaves its local classes: " + check.note);
  const auto& s = protocol.structure();
  if (s.size() != 2) throw std::invalid_argument("lfocc_ceiling expects a sender and a receiver");
  const auto& sender = s.parties()[0];
  const auto& receiver = s.parties()[1];
  if (sender.dim != s_a.dim()) throw std::invalid_argument("sender dimension does not match the free set");

  std::map<std::string, DensityOperator> aux;
  if (auxiliary.size() != 0) aux.emplace(receiver.label, DensityOperator(auxiliary));
  const auto channel = compile_lfocc(protocol);

  LfoccCertification out;
  Matrix e = effective_povm(channel, test, receiver.label, sender.label, aux);
  const Matrix& u = s_a.basis();
  Matrix in_basis = s_a.kind() == SetKind::Incoherent ? Matrix(u.adjoint() * e * u) : e;
  in_basis.diagonal().setZero();
  out.offdiagonal = in_basis.norm();
  out.diagonal = out.offdiagonal <= 1e-10;

  auto& r = out.report;
  r.floor = -std::log2(1.0 - epsilon);
  HypothesisOptions diag;
  diag.tests = TestClass::Diagonal;
  diag.basis = s_a.kind() == SetKind::Incoherent ? s_a.basis() : Matrix();
  diag.seed = seed;
  r.ceiling = hypothesis_testing(rho_a.matrix(), s_a, epsilon, diag).value;

  r.alpha = alpha_value(s_a, e, seed);
  if (r.alpha > epsilon) {
    e *= epsilon / r.alpha;
    r.note = "test scaled by eps / alpha to meet the type-I budget";
    r.alpha = epsilon;
  }
  r.beta = std::max(0.0, 1.0 - trace_product(rho_a.matrix(), e));
  r.value = r.beta <= 1e-12 ? kInfinity : -std::log2(r.beta);
  r.achiever = 0;
  r.test = test;
  out.effective = e;
  return out;
}

// --- resource non-generating preprocessing -------------------------------------

std::pair<KrausChannel, CertReport> rng_optimal_protocol(const DensityOperator& rho_a, const FreeStateSet& s_a,
                                                         const FreeStateSet& s_b, const DensityOperator& mu_a,
                                                         double epsilon, uint64_t seed) {
  if (s_a.dim() != s_b.dim()) throw std::invalid_argument("sender and receiver dimensions differ");
  if (!contains(s_a, mu_a.matrix())) throw std::invalid_argument("replacement state is not free for the sender");
  Rng rng(seed);
  auto probes = verification_states(s_a, rng, 100);
  for (int k = 0; k < 100; ++k) probes.push_back(random_free_state(s_a, rng));
  for (const auto& p : probes)
    if (!contains(s_b, p)) throw std::invalid_argument("sender free states are not free for the receiver");

  const int d = s_a.dim();
  const TensorStructure s({{"A", d}, {"B", d}});
  const auto map = [&](const Matrix& x) { return Matrix(kron(mu_a.matrix(), partial_trace(x, s, {0}))); };
  auto channel = from_linear_map(map, s, s);
  RemoteOptions opt;
  opt.seed = seed;
  auto report = remote_certification(rho_a, s_a, {channel}, epsilon, opt);
  return {std::move(channel), std::move(report)};
}

}  // namespace rescomp

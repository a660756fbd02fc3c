#include "rescomp/channel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rescomp {

// --- KrausChannel ------------------------------------------------------------

KrausChannel::KrausChannel(std::vector<Matrix> kraus, TensorStructure in, TensorStructure out, double tol)
    : kraus_(std::move(kraus)), in_(std::move(in)), out_(std::move(out)) {
  if (kraus_.empty()) throw std::invalid_argument("Kraus family is empty");
  for (const auto& k : kraus_)
    if (k.rows() != out_.total_dim() || k.cols() != in_.total_dim())
      throw std::invalid_argument("Kraus operator shape does not match the channel structures");
  if (trace_preservation_defect() > tol) throw std::invalid_argument("Kraus family is not trace preserving");
}

KrausChannel KrausChannel::identity(const TensorStructure& s) {
  return KrausChannel({rescomp::identity(s.total_dim())}, s, s);
}

KrausChannel KrausChannel::unitary(const Matrix& u, const TensorStructure& s) { return KrausChannel({u}, s, s); }

KrausChannel KrausChannel::replacement(const TensorStructure& in, const DensityOperator& sigma) {
  const auto e = eig_hermitian(sigma.matrix());
  std::vector<Matrix> ks;
  const int din = in.total_dim();
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) <= 1e-14) continue;
    const Vector v = std::sqrt(e.values(i)) * e.vectors.col(i);
    for (int a = 0; a < din; ++a) {
      Matrix k = Matrix::Zero(sigma.dim(), din);
      k.col(a) = v;
      ks.push_back(k);
    }
  }
  return KrausChannel(std::move(ks), in, sigma.structure());
}

Matrix KrausChannel::apply(const Matrix& x) const {
  if (x.rows() != in_dim() || x.cols() != in_dim()) throw std::invalid_argument("channel input dimension mismatch");
  Matrix y = Matrix::Zero(out_dim(), out_dim());
  for (const auto& k : kraus_) y.noalias() += k * x * k.adjoint();
  return y;
}

DensityOperator KrausChannel::apply(const DensityOperator& rho) const {
  return DensityOperator::trusted(apply(rho.matrix()), out_);
}

Matrix KrausChannel::apply_adjoint(const Matrix& y) const {
  if (y.rows() != out_dim() || y.cols() != out_dim()) throw std::invalid_argument("channel output dimension mismatch");
  Matrix x = Matrix::Zero(in_dim(), in_dim());
  for (const auto& k : kraus_) x.noalias() += k.adjoint() * y * k;
  return x;
}

Matrix KrausChannel::choi() const {
  const int din = in_dim(), dout = out_dim();
  Matrix j = Matrix::Zero(din * dout, din * dout);
  for (const auto& k : kraus_) {
    Vector v(din * dout);
    for (int a = 0; a < din; ++a)
      for (int o = 0; o < dout; ++o) v(a * dout + o) = k(o, a);
    j.noalias() += v * v.adjoint();
  }
  return j;
}

double KrausChannel::trace_preservation_defect() const {
  Matrix s = Matrix::Zero(in_dim(), in_dim());
  for (const auto& k : kraus_) s.noalias() += k.adjoint() * k;
  return (s - rescomp::identity(in_dim())).cwiseAbs().maxCoeff();
}

// --- combinators -------------------------------------------------------------

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (first.out_dim() != second.in_dim()) throw std::invalid_argument("compose: dimension mismatch");
  std::vector<Matrix> ks;
  ks.reserve(first.kraus().size() * second.kraus().size());
  for (const auto& k2 : second.kraus())
    for (const auto& k1 : first.kraus()) ks.push_back(k2 * k1);
  return KrausChannel(std::move(ks), first.in_structure(), second.out_structure(), 1e-8);
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<Matrix> ks;
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) ks.push_back(kron(ka, kb));
  return KrausChannel(std::move(ks), a.in_structure().concat(b.in_structure()),
                      a.out_structure().concat(b.out_structure()), 1e-8);
}

KrausChannel mixture(const std::vector<KrausChannel>& channels, const std::vector<double>& weights) {
  if (channels.empty() || channels.size() != weights.size())
    throw std::invalid_argument("mixture: channels and weights must be nonempty and of equal length");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture: weights must sum to 1");
  std::vector<Matrix> ks;
  for (size_t i = 0; i < channels.size(); ++i) {
    if (weights[i] < 0) throw std::invalid_argument("mixture: negative weight");
    if (channels[i].in_dim() != channels[0].in_dim() || channels[i].out_dim() != channels[0].out_dim())
      throw std::invalid_argument("mixture: dimension mismatch");
    if (weights[i] == 0) continue;
    for (const auto& k : channels[i].kraus()) ks.push_back(std::sqrt(weights[i]) * k);
  }
  return KrausChannel(std::move(ks), channels[0].in_structure(), channels[0].out_structure(), 1e-8);
}

KrausChannel from_choi(const Matrix& choi, const TensorStructure& in, const TensorStructure& out, double tol) {
  const int din = in.total_dim(), dout = out.total_dim();
  if (choi.rows() != din * dout) throw std::invalid_argument("from_choi: dimension mismatch");
  const auto e = eig_hermitian(choi);
  if (e.values(0) < -1e-8) throw std::invalid_argument("from_choi: map is not completely positive");
  std::vector<Matrix> ks;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) <= kEigClamp) continue;
    Matrix k(dout, din);
    const double s = std::sqrt(e.values(i));
    for (int a = 0; a < din; ++a)
      for (int o = 0; o < dout; ++o) k(o, a) = s * e.vectors(a * dout + o, i);
    ks.push_back(std::move(k));
  }
  return KrausChannel(std::move(ks), in, out, tol);
}

KrausChannel from_linear_map(const std::function<Matrix(const Matrix&)>& map, const TensorStructure& in,
                             const TensorStructure& out, double tol) {
  const int din = in.total_dim(), dout = out.total_dim();
  Matrix j = Matrix::Zero(din * dout, din * dout);
  for (int a = 0; a < din; ++a) {
    for (int b = 0; b < din; ++b) {
      Matrix unit = Matrix::Zero(din, din);
      unit(a, b) = 1.0;
      const Matrix img = map(unit);
      if (img.rows() != dout || img.cols() != dout) throw std::invalid_argument("from_linear_map: output shape mismatch");
      j.block(a * dout, b * dout, dout, dout) = img;
    }
  }
  return from_choi(hermitian_part(j), in, out, tol);
}

KrausChannel marginal_channel(const KrausChannel& channel, const std::string& target,
                              const std::map<std::string, DensityOperator>& frozen) {
  const auto& in = channel.in_structure();
  const auto& out = channel.out_structure();
  const int ti = in.index_of(target);
  const int to = out.index_of(target);
  std::vector<Matrix> factors;
  for (int k = 0; k < static_cast<int>(in.size()); ++k) {
    if (k == ti) {
      factors.emplace_back();
      continue;
    }
    const auto& label = in.parties()[static_cast<size_t>(k)].label;
    auto it = frozen.find(label);
    if (it == frozen.end()) throw std::invalid_argument("marginal_channel: missing frozen input for party '" + label + "'");
    if (it->second.dim() != in.parties()[static_cast<size_t>(k)].dim)
      throw std::invalid_argument("marginal_channel: frozen state dimension mismatch for party '" + label + "'");
    factors.push_back(it->second.matrix());
  }
  auto map = [&](const Matrix& x) {
    Matrix full = Matrix::Identity(1, 1);
    for (int k = 0; k < static_cast<int>(factors.size()); ++k) full = kron(full, k == ti ? x : factors[static_cast<size_t>(k)]);
    return partial_trace(channel.apply(full), out, {to});
  };
  const TensorStructure tin = in.subset({ti});
  const TensorStructure tout = out.subset({to});
  return from_linear_map(map, tin, tout);
}

KrausChannel choi_marginal_channel(const KrausChannel& channel, const std::string& target) {
  std::map<std::string, DensityOperator> frozen;
  for (const auto& p : channel.in_structure().parties())
    if (p.label != target) frozen.emplace(p.label, maximally_mixed(p.dim));
  return marginal_channel(channel, target, frozen);
}

double unitality_defect(const KrausChannel& channel) {
  if (channel.in_dim() != channel.out_dim()) throw std::invalid_argument("unitality requires equal input and output dimension");
  const int d = channel.in_dim();
  const Matrix mixed = rescomp::identity(d) / static_cast<double>(d);
  return trace_norm(channel.apply(mixed) - mixed);
}

bool is_unital(const KrausChannel& channel, double tol) { return unitality_defect(channel) <= tol; }

KrausChannel dephasing_channel(int dim) {
  std::vector<Matrix> ks;
  for (int i = 0; i < dim; ++i) ks.push_back(basis_projector(dim, i));
  const auto s = TensorStructure::single(dim);
  return KrausChannel(std::move(ks), s, s);
}

KrausChannel swap_channel(const TensorStructure& s, int a, int b) {
  if (s.parties().at(static_cast<size_t>(a)).dim != s.parties().at(static_cast<size_t>(b)).dim)
    throw std::invalid_argument("swap_channel: parties have different dimensions");
  std::vector<int> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::swap(order[static_cast<size_t>(a)], order[static_cast<size_t>(b)]);
  return KrausChannel::unitary(permutation_unitary(s, order), s);
}

KrausChannel pauli_x_channel() { return KrausChannel::unitary(pauli_x(), TensorStructure::single(2)); }

void Povm::validate() const {
  if (elements.empty()) throw std::invalid_argument("POVM has no elements");
  const auto n = elements.front().rows();
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& e : elements) {
    if (e.rows() != n || e.cols() != n) throw std::invalid_argument("POVM elements have inconsistent shapes");
    if (hermiticity_defect(e) > 1e-10 || min_eigenvalue(e) < -1e-10)
      throw std::invalid_argument("POVM element is not positive semidefinite");
    sum += e;
  }
  if ((sum - rescomp::identity(static_cast<int>(n))).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("POVM elements do not sum to the identity");
}

// --- LFOCC -------------------------------------------------------------------

std::string extend_history(const std::string& h, int outcome) {
  return h.empty() ? std::to_string(outcome) : h + "." + std::to_string(outcome);
}

LfoccProtocol::LfoccProtocol(TensorStructure structure, std::vector<LfoccRound> rounds)
    : structure_(std::move(structure)), rounds_(std::move(rounds)) {
  if (rounds_.empty()) throw std::invalid_argument("protocol has no rounds");
  for (size_t r = 0; r < rounds_.size(); ++r) {
    const auto& round = rounds_[r];
    const int d = structure_.parties().at(static_cast<size_t>(structure_.index_of(round.party))).dim;
    for (const auto& h : histories(r)) {
      const auto& fam = family(r, h);
      if (fam.empty()) throw std::invalid_argument("empty Kraus family in round " + std::to_string(r));
      Matrix s = Matrix::Zero(d, d);
      for (const auto& k : fam) {
        if (k.rows() != d || k.cols() != d)
          throw std::invalid_argument("round " + std::to_string(r) + ": Kraus operator does not match party dimension");
        s += k.adjoint() * k;
      }
      if ((s - rescomp::identity(d)).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("round " + std::to_string(r) + ", history '" + h + "': family is not trace preserving");
    }
  }
}

std::vector<std::string> LfoccProtocol::histories(size_t round) const {
  std::vector<std::string> hs{""};
  for (size_t r = 0; r < round; ++r) {
    std::vector<std::string> next;
    for (const auto& h : hs) {
      const auto n = family(r, h).size();
      for (size_t l = 0; l < n; ++l) next.push_back(extend_history(h, static_cast<int>(l)));
    }
    hs = std::move(next);
    if (hs.size() > static_cast<size_t>(kMaxLfoccBranches))
      throw std::invalid_argument("protocol exceeds the branch cap of " + std::to_string(kMaxLfoccBranches));
  }
  return hs;
}

const std::vector<Matrix>& LfoccProtocol::family(size_t round, const std::string& h) const {
  const auto& branches = rounds_.at(round).branches;
  auto it = branches.find(h);
  if (it == branches.end())
    throw std::invalid_argument("round " + std::to_string(round) + " has no Kraus family for history '" + h + "'");
  return it->second;
}

KrausChannel compile_lfocc(const LfoccProtocol& protocol) {
  const auto& s = protocol.structure();
  const int n = s.total_dim();
  struct Node {
    std::string history;
    Matrix op;
  };
  std::vector<Node> frontier{{"", rescomp::identity(n)}};
  for (size_t r = 0; r < protocol.rounds().size(); ++r) {
    const int party = s.index_of(protocol.rounds()[r].party);
    std::vector<Node> next;
    for (const auto& node : frontier) {
      const auto& fam = protocol.family(r, node.history);
      for (size_t l = 0; l < fam.size(); ++l) {
        next.push_back({extend_history(node.history, static_cast<int>(l)), embed(fam[l], s, party) * node.op});
        if (next.size() > static_cast<size_t>(kMaxLfoccBranches))
          throw std::invalid_argument("protocol exceeds the branch cap of " + std::to_string(kMaxLfoccBranches));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Matrix> ks;
  for (auto& node : frontier) ks.push_back(std::move(node.op));
  return KrausChannel(std::move(ks), s, s, 1e-8);
}

std::pair<Matrix, std::string> sample_lfocc_branch(const LfoccProtocol& protocol, const Matrix& rho, Rng& rng) {
  const auto& s = protocol.structure();
  Matrix state = rho;
  std::string h;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (size_t r = 0; r < protocol.rounds().size(); ++r) {
    const int party = s.index_of(protocol.rounds()[r].party);
    const auto& fam = protocol.family(r, h);
    std::vector<Matrix> posts;
    std::vector<double> probs;
    for (const auto& k : fam) {
      const Matrix g = embed(k, s, party);
      posts.push_back(g * state * g.adjoint());
      probs.push_back(std::max(0.0, posts.back().trace().real()));
    }
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    double x = u(rng) * total;
    size_t pick = 0;
    while (pick + 1 < probs.size() && (x -= probs[pick]) > 0) ++pick;
    while (probs[pick] <= 0 && pick + 1 < probs.size()) ++pick;
    state = posts[pick] / probs[pick];
    h = extend_history(h, static_cast<int>(pick));
  }
  return {state, h};
}

Matrix effective_povm(const KrausChannel& channel, const Matrix& element, const std::string& measured_party,
                      const std::string& source_party, const std::map<std::string, DensityOperator>& aux) {
  const auto& in = channel.in_structure();
  const auto& out = channel.out_structure();
  const int m = out.index_of(measured_party);
  const Matrix lifted = embed(element, out, m);
  const Matrix heis = channel.apply_adjoint(lifted);
  if (in.size() == 1) return hermitian_part(heis);

  int src = -1;
  if (!source_party.empty()) {
    src = in.index_of(source_party);
  } else {
    for (int k = 0; k < static_cast<int>(in.size()); ++k)
      if (!aux.count(in.parties()[static_cast<size_t>(k)].label)) {
        if (src >= 0) throw std::invalid_argument("effective_povm: source party is ambiguous");
        src = k;
      }
    if (src < 0) throw std::invalid_argument("effective_povm: every input party has an auxiliary state");
  }
  Matrix weight = Matrix::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(in.size()); ++k) {
    const auto& p = in.parties()[static_cast<size_t>(k)];
    if (k == src) {
      weight = kron(weight, rescomp::identity(p.dim));
      continue;
    }
    auto it = aux.find(p.label);
    weight = kron(weight, it != aux.end() ? it->second.matrix() : rescomp::identity(p.dim) / static_cast<double>(p.dim));
  }
  return hermitian_part(partial_trace(weight * heis, in, {src}));
}

}  // namespace rescomp

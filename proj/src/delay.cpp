#include "adtnc/delay.hpp"

#include <algorithm>
#include <string>

#include "adtnc/error.hpp"

namespace adtnc {

namespace {

Rat rzero(const Gf* f) { return Rat::zero(f); }
Rat rone(const Gf* f) { return Rat::one(f); }

const Gf* matrix_field(const Matrix<Rat>& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (const Gf* f = m(i, j).field()) return f;
  return nullptr;
}

int nonneg_deg(const Poly& p) { return std::max(p.degree(), 0); }

/* Evaluate p at `at`, carrying each coefficient through the subfield
 * embedding first. */
Fe eval_embedded(const Poly& p, const Gf* small, const Gf* big, const Fe& at) {
  Fe acc(big, 0);
  for (int k = p.degree(); k >= 0; --k)
    acc = acc * at + Fe(big, embed(small, big, p.coeff(k).value()));
  return acc;
}

Matrix<Rat> delayed_encoding(const Network& net, const DelayedCode& code) {
  const Gf* f = net.field();
  Matrix<Rat> a(net.total_source_processes(), net.port_count(), rzero(f));
  for (const auto& [key, v] : code.encoding) {
    auto [proc, port] = key;
    if (port < 0 || port >= net.port_count() || net.port(port).dir != PortDir::out)
      throw UsageError("encoding coefficient on port " + std::to_string(port) +
                       " which is not an output port");
    auto si = net.source_index(net.port(port).node);
    if (!si)
      throw UsageError("encoding coefficient on port " + std::to_string(port) +
                       " whose node is not a source");
    if (proc < 0 || proc >= net.sources()[*si].processes)
      throw UsageError("encoding coefficient for process " + std::to_string(proc) +
                       " outside the source's range");
    int base = 0;
    for (int k = 0; k < *si; ++k) base += net.sources()[k].processes;
    a(base + proc, port) = v;
  }
  return a;
}

Matrix<Rat> delayed_decoding(const Network& net, const DelayedCode& code) {
  const Gf* f = net.field();
  Matrix<Rat> b(net.total_dest_processes(), net.port_count(), rzero(f));
  for (const auto& [key, v] : code.decoding) {
    auto [port, proc] = key;
    if (port < 0 || port >= net.port_count() || net.port(port).dir != PortDir::in)
      throw UsageError("decoding coefficient on port " + std::to_string(port) +
                       " which is not an input port");
    auto di = net.dest_index(net.port(port).node);
    if (!di)
      throw UsageError("decoding coefficient on port " + std::to_string(port) +
                       " whose node is not a destination");
    if (proc < 0 || proc >= net.dests()[*di].processes)
      throw UsageError("decoding coefficient for process " + std::to_string(proc) +
                       " outside the destination's range");
    int base = 0;
    for (int k = 0; k < *di; ++k) base += net.dests()[k].processes;
    b(base + proc, port) = v;
  }
  return b;
}

}  // namespace

Matrix<Rat> delayed_transfer(const Matrix<Fe>& f, const Gf* field) {
  if (f.rows() != f.cols()) throw UsageError("adjacency matrix must be square");
  if (!field) throw UsageError("delayed_transfer: null field");
  const int n = f.rows();
  Matrix<Rat> a(n, n, rzero(field));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat v = i == j ? rone(field) : rzero(field);
      if (!f(i, j).is_zero()) v -= Rat(Poly::monomial(f(i, j), 1));
      a(i, j) = v;
    }
  // det(I - D F) has constant term 1, so this never throws
  return inverse(a, rzero(field), rone(field));
}

Matrix<Poly> delayed_transfer_series(const Matrix<Fe>& f, const Gf* field, int order) {
  if (f.rows() != f.cols()) throw UsageError("adjacency matrix must be square");
  if (!field) throw UsageError("delayed_transfer_series: null field");
  if (order < 1) throw UsageError("series order must be positive");
  const int n = f.rows();
  const Fe zero(field, 0);
  std::vector<std::vector<std::vector<Fe>>> coeffs(
      n, std::vector<std::vector<Fe>>(n, std::vector<Fe>(order, zero)));
  Matrix<Fe> pw = Matrix<Fe>::identity(n, zero, Fe(field, 1));
  for (int k = 0; k < order; ++k) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) coeffs[i][j][k] = pw(i, j);
    if (k + 1 < order) pw = pw * f;
  }
  Matrix<Poly> out(n, n, Poly());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = Poly(std::move(coeffs[i][j]));
  return out;
}

DelayedCode DelayedCode::from_static(const Network& net, const CodeAssignment& code) {
  const Gf* f = net.field();
  DelayedCode d;
  d.internal = code.internal;
  for (const auto& [k, v] : code.encoding) d.encoding[k] = Rat(Fe(f, v));
  for (const auto& [k, v] : code.decoding) d.decoding[k] = Rat(Fe(f, v));
  return d;
}

Matrix<Rat> DelayedSystem::block(int source, int dest) const {
  std::vector<int> rows, cols;
  for (int r = row_blocks.at(source).first; r < row_blocks.at(source).second; ++r)
    rows.push_back(r);
  for (int c = col_blocks.at(dest).first; c < col_blocks.at(dest).second; ++c)
    cols.push_back(c);
  return m.submatrix(rows, cols);
}

Matrix<Rat> DelayedSystem::dest_block(int dest) const {
  std::vector<int> rows, cols;
  for (int r = 0; r < m.rows(); ++r) rows.push_back(r);
  for (int c = col_blocks.at(dest).first; c < col_blocks.at(dest).second; ++c)
    cols.push_back(c);
  return m.submatrix(rows, cols);
}

DelayedSystem delayed_system_matrix(const Network& net, const DelayedCode& code) {
  net.require_valid();
  CodeAssignment relays;
  relays.internal = code.internal;
  Matrix<Fe> f = adjacency_matrix(net, relays);
  Matrix<Rat> t = delayed_transfer(f, net.field());
  Matrix<Rat> a = delayed_encoding(net, code);
  Matrix<Rat> b = delayed_decoding(net, code);
  DelayedSystem out{a * t * b.transposed(), {}, {}};
  int r = 0;
  for (const auto& s : net.sources()) {
    out.row_blocks.push_back({r, r + s.processes});
    r += s.processes;
  }
  int c = 0;
  for (const auto& d : net.dests()) {
    out.col_blocks.push_back({c, c + d.processes});
    c += d.processes;
  }
  return out;
}

std::string delay_method_name(DelayMethod m) {
  return m == DelayMethod::symbolic ? "symbolic" : "evaluation";
}

DelayCheck delayed_nonsingular(const Matrix<Rat>& m, DelayMethod method, SplitRng* rng) {
  if (m.rows() != m.cols()) throw UsageError("nonsingularity needs a square matrix");
  if (m.rows() == 0) throw UsageError("nonsingularity of an empty matrix");
  DelayCheck out;
  out.method = method;
  if (method == DelayMethod::symbolic) {
    out.det = det(m);
    out.nonsingular = !out.det.is_zero();
    return out;
  }

  if (!rng) throw UsageError("the evaluation method needs a random stream");
  const Gf* f = matrix_field(m);
  if (!f) throw UsageError("matrix carries no field");
  // Clearing every denominator leaves det * prod(den), a polynomial of degree
  // at most (row maxima of numerator degrees) + (all denominator degrees).
  long long bound = 0;
  for (int i = 0; i < m.rows(); ++i) {
    int best = 0;
    for (int j = 0; j < m.cols(); ++j) best = std::max(best, nonneg_deg(m(i, j).num()));
    bound += best;
  }
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) bound += nonneg_deg(m(i, j).den());
  if (bound < 1) bound = 1;
  out.degree_bound = int(bound);

  const Gf* big = f;
  if (f->order() <= 2 * uint64_t(bound)) {
    if (f->characteristic() != 2)
      throw UsageError(
          "the evaluation method needs a field larger than twice the degree "
          "bound; use the symbolic method");
    uint32_t k = f->degree();
    while (k <= 16 && (uint64_t(1) << k) <= 2 * uint64_t(bound)) k += f->degree();
    if (k > 16)
      throw UsageError(
          "no characteristic-2 extension is large enough for the evaluation "
          "margin; use the symbolic method");
    big = Gf::get(2, k);
  }
  out.eval_order = big->order();

  for (int attempt = 0; attempt < 64; ++attempt) {
    const Fe d(big, big->uniform(*rng));
    Matrix<Fe> me(m.rows(), m.cols(), Fe(big, 0));
    bool defined = true;
    for (int i = 0; i < m.rows() && defined; ++i)
      for (int j = 0; j < m.cols() && defined; ++j) {
        const Rat& e = m(i, j);
        if (e.is_zero()) continue;
        const Fe den = eval_embedded(e.den(), f, big, d);
        if (den.is_zero()) {
          defined = false;
          break;
        }
        me(i, j) = eval_embedded(e.num(), f, big, d) / den;
      }
    if (!defined) continue;
    out.nonsingular = rank(me) == m.rows();
    return out;
  }
  throw ArithmeticError("no evaluation point avoided every denominator root");
}

Matrix<Fe> simulate_time(const Network& net, const CodeAssignment& code, const Matrix<Fe>& x) {
  net.require_valid();
  if (x.cols() != net.total_source_processes())
    throw UsageError("simulation input needs one column per source process");
  const Gf* gf = net.field();
  const Matrix<Fe> f = adjacency_matrix(net, code);
  const Matrix<Fe> a = encoding_matrix(net, code);
  const Matrix<Fe> bt = decoding_matrix(net, code).transposed();
  std::vector<int> src_cols(x.cols());
  for (int j = 0; j < x.cols(); ++j) src_cols[j] = j;
  Matrix<Fe> y(1, net.port_count(), Fe(gf, 0));
  Matrix<Fe> z(x.rows(), net.total_dest_processes(), Fe(gf, 0));
  for (int t = 0; t < x.rows(); ++t) {
    y = y * f + x.submatrix({t}, src_cols) * a;
    const Matrix<Fe> zt = y * bt;
    for (int j = 0; j < zt.cols(); ++j) z(t, j) = zt(0, j);
  }
  return z;
}

Matrix<Fe> at_unit_delay(const Matrix<Rat>& m, const Gf* field) {
  if (!field) throw UsageError("at_unit_delay: null field");
  const Fe one(field, 1);
  Matrix<Fe> out(m.rows(), m.cols(), Fe(field, 0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) out(i, j) = m(i, j).eval(one);
  return out;
}

}  // namespace adtnc

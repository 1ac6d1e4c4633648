#include "adtnc/system.hpp"

#include <queue>
#include <string>

#include "adtnc/error.hpp"

namespace adtnc {

namespace {

Fe fe(const Network& net, uint32_t v) { return Fe(net.field(), v); }

}  // namespace

Matrix<Fe> adjacency_matrix(const Network& net, const CodeAssignment& code,
                            const std::set<std::pair<int, int>>& dead) {
  net.require_valid();
  int n = net.port_count();
  Matrix<Fe> f(n, n, fe(net, 0));
  for (auto e : net.edges())
    if (!dead.count(e)) f(e.first, e.second) = fe(net, 1);
  for (auto& [key, v] : code.internal) {
    auto [in, out] = key;
    if (in < 0 || in >= n || out < 0 || out >= n ||
        net.port(in).dir != PortDir::in || net.port(out).dir != PortDir::out)
      throw UsageError("internal coefficient (" + std::to_string(in) + ", " +
                       std::to_string(out) + ") must pair an input port with an output port");
    if (net.port(in).node != net.port(out).node)
      throw UsageError("internal coefficient (" + std::to_string(in) + ", " +
                       std::to_string(out) + ") crosses nodes; only edges connect nodes");
    f(in, out) = fe(net, v);
  }
  return f;
}

Matrix<Fe> transfer_matrix(const Matrix<Fe>& f) {
  if (f.rows() != f.cols()) throw UsageError("adjacency matrix must be square");
  int n = f.rows();
  if (n == 0) return f;
  Fe zero;

  // Topological order of the nonzero pattern.
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(f(i, j) == zero)) {
        succ[i].push_back(j);
        ++indeg[j];
      }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<int> order;
  while (!ready.empty()) {
    int i = ready.top();
    ready.pop();
    order.push_back(i);
    for (int j : succ[i])
      if (--indeg[j] == 0) ready.push(j);
  }
  if (int(order.size()) != n)
    throw UsageError(
        "adjacency pattern has a directed cycle; the static transfer matrix "
        "does not exist (use the delay analysis)");

  const Gf* gf = nullptr;
  for (int i = 0; i < n && !gf; ++i)
    for (int j = 0; j < n && !gf; ++j) gf = f(i, j).field();
  if (!gf) throw UsageError("adjacency matrix carries no field");

  // T = I + F T: fill rows from the sinks backwards, so every successor row
  // needed on the right side is already final.
  Matrix<Fe> t = Matrix<Fe>::identity(n, Fe(gf, 0), Fe(gf, 1));
  for (int k = n - 1; k >= 0; --k) {
    int i = order[k];
    for (int j : succ[i])
      for (int c = 0; c < n; ++c) t(i, c) = t(i, c) + f(i, j) * t(j, c);
  }
  return t;
}

Matrix<Fe> encoding_matrix(const Network& net, const CodeAssignment& code) {
  net.require_valid();
  int rows = net.total_source_processes();
  Matrix<Fe> a(rows, net.port_count(), fe(net, 0));
  for (auto& [key, v] : code.encoding) {
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
    a(base + proc, port) = fe(net, v);
  }
  return a;
}

Matrix<Fe> decoding_matrix(const Network& net, const CodeAssignment& code) {
  net.require_valid();
  int rows = net.total_dest_processes();
  Matrix<Fe> b(rows, net.port_count(), fe(net, 0));
  for (auto& [key, v] : code.decoding) {
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
    b(base + proc, port) = fe(net, v);
  }
  return b;
}

Matrix<Fe> SystemMatrix::block(int source, int dest) const {
  std::vector<int> rows, cols;
  for (int r = row_blocks.at(source).first; r < row_blocks.at(source).second; ++r)
    rows.push_back(r);
  for (int c = col_blocks.at(dest).first; c < col_blocks.at(dest).second; ++c)
    cols.push_back(c);
  return m.submatrix(rows, cols);
}

Matrix<Fe> SystemMatrix::dest_block(int dest) const {
  std::vector<int> rows, cols;
  for (int r = 0; r < m.rows(); ++r) rows.push_back(r);
  for (int c = col_blocks.at(dest).first; c < col_blocks.at(dest).second; ++c)
    cols.push_back(c);
  return m.submatrix(rows, cols);
}

SystemMatrix system_matrix(const Network& net, const CodeAssignment& code,
                           const std::set<std::pair<int, int>>& dead) {
  auto f = adjacency_matrix(net, code, dead);
  auto a = encoding_matrix(net, code);
  auto b = decoding_matrix(net, code);
  SystemMatrix sm{a * transfer_matrix(f) * b.transposed(), {}, {}};
  int r = 0;
  for (auto& s : net.sources()) {
    sm.row_blocks.push_back({r, r + s.processes});
    r += s.processes;
  }
  int c = 0;
  for (auto& d : net.dests()) {
    sm.col_blocks.push_back({c, c + d.processes});
    c += d.processes;
  }
  return sm;
}

CodeAssignment random_assignment(const Network& net, SplitRng& rng) {
  const Gf* f = net.field();
  CodeAssignment code;
  for (auto& s : net.sources())
    for (int i = 0; i < s.processes; ++i)
      for (int e : net.output_ports(s.node)) code.encoding[{i, e}] = f->uniform(rng);
  for (int v = 0; v < net.node_count(); ++v)
    for (int in : net.input_ports(v))
      for (int out : net.output_ports(v)) code.internal[{in, out}] = f->uniform(rng);
  for (auto& d : net.dests())
    for (int e : net.input_ports(d.node))
      for (int i = 0; i < d.processes; ++i) code.decoding[{e, i}] = f->uniform(rng);
  return code;
}

}  // namespace adtnc

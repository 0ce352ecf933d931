#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace specgap {

enum class BlockKind { cycle, discrete_sphere };

struct Covering {
  enum class Kind { base, cyclic, line };
  Kind kind = Kind::base;
  int copies = 1;

  static Covering base() { return {Kind::base, 1}; }
  static Covering cyclic(int k) { return {Kind::cyclic, k}; }
  static Covering line(int l) { return {Kind::line, l}; }
};

// Sparse symmetric Laplacian of block copies joined by weak coupling edges at
// designated antipodal port vertices; the discrete stand-in for the covering
// manifolds.  Entries are stored once with i <= j.
struct BlockGraphOp {
  struct Entry {
    int i, j;
    double value;
  };
  std::vector<Entry> entries;
  int size = 0;
  std::vector<std::pair<int, int>> block_ranges;  // [begin,end) per copy
  double coupling = 0.0;
  Covering covering;
  BlockKind block_kind = BlockKind::cycle;
  int block_size = 0;
  std::vector<int> ports;  // per copy: entry port, exit port

  void apply(const std::vector<double>& u, std::vector<double>& v) const {
    v.assign(size, 0.0);
    for (const auto& e : entries) {
      if (e.i == e.j) {
        v[e.i] += e.value * u[e.i];
      } else {
        v[e.i] += e.value * u[e.j];
        v[e.j] += e.value * u[e.i];
      }
    }
  }

  double gershgorin_max() const {
    std::vector<double> diag(size, 0.0), rad(size, 0.0);
    for (const auto& e : entries) {
      if (e.i == e.j) {
        diag[e.i] += e.value;
      } else {
        rad[e.i] += std::abs(e.value);
        rad[e.j] += std::abs(e.value);
      }
    }
    double m = 0.0;
    for (int i = 0; i < size; ++i) m = std::max(m, diag[i] + rad[i]);
    return m;
  }
};

namespace detail {

inline void block_entries(BlockKind kind, int b, int offset, std::vector<BlockGraphOp::Entry>& out) {
  if (kind == BlockKind::cycle) {
    for (int i = 0; i < b; ++i) {
      out.push_back({offset + i, offset + i, 2.0});
      int j = (i + 1) % b;
      out.push_back({offset + std::min(i, j), offset + std::max(i, j), -1.0});
    }
  } else {  // cocktail-party graph: complete minus the antipodal matching
    int half = b / 2;
    for (int i = 0; i < b; ++i) out.push_back({offset + i, offset + i, static_cast<double>(b - 2)});
    for (int i = 0; i < b; ++i)
      for (int j = i + 1; j < b; ++j)
        if (j != i + half) out.push_back({offset + i, offset + j, -1.0});
  }
}

}  // namespace detail

inline BlockGraphOp block_graph_laplacian(int block_size, BlockKind kind, double coupling,
                                          Covering covering) {
  if (block_size < 3) throw std::invalid_argument("block_graph_laplacian: block_size must be >= 3");
  if (kind == BlockKind::discrete_sphere && (block_size < 4 || block_size % 2 != 0))
    throw std::invalid_argument("block_graph_laplacian: discrete_sphere needs even block_size >= 4");
  if (coupling < 0.0) throw std::invalid_argument("block_graph_laplacian: coupling must be >= 0");
  int copies = 1;
  switch (covering.kind) {
    case Covering::Kind::base:
      copies = 1;
      break;
    case Covering::Kind::cyclic:
      if (covering.copies < 2) throw std::invalid_argument("block_graph_laplacian: cyclic(k) needs k >= 2");
      copies = covering.copies;
      break;
    case Covering::Kind::line:
      if (covering.copies < 2) throw std::invalid_argument("block_graph_laplacian: line(L) needs L >= 2");
      copies = covering.copies;
      break;
  }

  BlockGraphOp op;
  op.block_kind = kind;
  op.block_size = block_size;
  op.coupling = coupling;
  op.covering = covering;
  op.size = copies * block_size;
  const int pin = 0, pout = block_size / 2;  // antipodal ports
  for (int c = 0; c < copies; ++c) {
    int off = c * block_size;
    op.block_ranges.emplace_back(off, off + block_size);
    op.ports.push_back(off + pin);
    op.ports.push_back(off + pout);
    detail::block_entries(kind, block_size, off, op.entries);
  }
  auto add_coupling = [&](int a, int b) {
    op.entries.push_back({a, a, coupling});
    op.entries.push_back({b, b, coupling});
    op.entries.push_back({std::min(a, b), std::max(a, b), -coupling});
  };
  switch (covering.kind) {
    case Covering::Kind::base:
      add_coupling(pout, pin);
      break;
    case Covering::Kind::cyclic:
      for (int c = 0; c < copies; ++c)
        add_coupling(c * block_size + pout, ((c + 1) % copies) * block_size + pin);
      break;
    case Covering::Kind::line:
      for (int c = 0; c + 1 < copies; ++c)
        add_coupling(c * block_size + pout, (c + 1) * block_size + pin);
      break;
  }
  return op;
}

// Covering operator whose quotient by the deck action is the given base;
// cyclic(1) reproduces the base itself.
inline BlockGraphOp lift_operator(const BlockGraphOp& base, Covering covering) {
  if (base.covering.kind != Covering::Kind::base)
    throw std::invalid_argument("lift_operator: operator is already lifted");
  if (covering.kind == Covering::Kind::cyclic && covering.copies == 1)
    return base;
  return block_graph_laplacian(base.block_size, base.block_kind, base.coupling, covering);
}

// Principal submatrix on the port vertices: the discrete neck with Dirichlet
// conditions at the block interiors.  Returned dense, column-major.
inline std::pair<int, std::vector<double>> neck_submatrix(const BlockGraphOp& op) {
  std::vector<int> pos(op.size, -1);
  for (std::size_t k = 0; k < op.ports.size(); ++k) pos[op.ports[k]] = static_cast<int>(k);
  int d = static_cast<int>(op.ports.size());
  std::vector<double> a(static_cast<std::size_t>(d) * d, 0.0);
  for (const auto& e : op.entries) {
    int pi = pos[e.i], pj = pos[e.j];
    if (pi < 0 || pj < 0) continue;
    if (pi == pj && e.i == e.j) {
      a[pi * d + pi] += e.value;
    } else if (e.i != e.j) {
      a[pi * d + pj] += e.value;
      a[pj * d + pi] += e.value;
    }
  }
  return {d, std::move(a)};
}

}  // namespace specgap

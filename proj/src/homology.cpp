#include "drclosure/homology.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace drclosure {

namespace {

long checked_sub_mul(long a, long q, long b) {
  long prod = 0, out = 0;
  if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out)) {
    throw std::overflow_error("integer kernel: coefficient overflow");
  }
  return out;
}

}  // namespace

CellComplex::CellComplex(const MarkedDualGraph& g) : edge_count_(g.edges.size()) {
  for (std::size_t l = 0; l < g.legs.size(); ++l) {
    if (g.legs[l].is_zero()) z_legs_.push_back(l);
  }
}

std::vector<long> CellComplex::boundary(const MarkedDualGraph& g, const Chain& c) const {
  std::vector<long> b(g.vertices.size(), 0);
  for (std::size_t e = 0; e < edge_count_; ++e) {
    b[g.edges[e].ends[1]] += c[e];
    b[g.edges[e].ends[0]] -= c[e];
  }
  // The marked endpoint of a Z-leg is in Z, so only the vertex end survives.
  for (std::size_t k = 0; k < z_legs_.size(); ++k) b[g.legs[z_legs_[k]].vertex] -= c[leg_cell(k)];
  return b;
}

std::string CellComplex::describe(const MarkedDualGraph& g, const Chain& c) const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    if (c[cell] == 0) continue;
    const std::string& name = is_edge_cell(cell) ? g.edges[cell].id : g.legs[cell_leg(cell)].id;
    long mag = std::labs(c[cell]);
    out << (first ? (c[cell] < 0 ? "-" : "") : (c[cell] < 0 ? " - " : " + "));
    if (mag != 1) out << mag << "*";
    out << name;
    first = false;
  }
  return first ? "0" : out.str();
}

std::vector<std::vector<long>> integer_kernel(const std::vector<std::vector<long>>& rows, std::size_t n) {
  std::vector<std::vector<long>> a = rows;  // m x n, reduced by column operations
  std::vector<std::vector<long>> u(n, std::vector<long>(n, 0));  // u[row][col]
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (auto& row : a) std::swap(row[x], row[y]);
    for (auto& row : u) std::swap(row[x], row[y]);
  };
  auto col_sub = [&](std::size_t target, long q, std::size_t src) {  // col_target -= q * col_src
    for (auto& row : a) row[target] = checked_sub_mul(row[target], q, row[src]);
    for (auto& row : u) row[target] = checked_sub_mul(row[target], q, row[src]);
  };

  std::size_t k = 0;
  for (std::size_t r = 0; r < a.size() && k < n; ++r) {
    while (true) {
      std::size_t best = n;
      for (std::size_t c = k; c < n; ++c) {
        if (a[r][c] != 0 && (best == n || std::labs(a[r][c]) < std::labs(a[r][best]))) best = c;
      }
      if (best == n) break;
      swap_cols(k, best);
      bool done = true;
      for (std::size_t c = k + 1; c < n; ++c) {
        if (a[r][c] == 0) continue;
        col_sub(c, a[r][c] / a[r][k], k);
        if (a[r][c] != 0) done = false;
      }
      if (done) {
        ++k;
        break;
      }
    }
  }
  std::vector<std::vector<long>> kernel;
  for (std::size_t c = k; c < n; ++c) {
    std::vector<long> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i][c];
    // Sign normalization: first nonzero entry positive.
    auto nz = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
    if (nz != v.end() && *nz < 0) {
      for (auto& x : v) x = -x;
    }
    kernel.push_back(std::move(v));
  }
  return kernel;
}

namespace {

// Kernel of the boundary map restricted to the given cells, embedded back
// into ambient chains.
std::vector<Chain> kernel_on_cells(const MarkedDualGraph& g, const CellComplex& cx,
                                   const std::vector<std::size_t>& cells) {
  std::vector<std::vector<long>> rows(g.vertices.size(), std::vector<long>(cells.size(), 0));
  for (std::size_t j = 0; j < cells.size(); ++j) {
    std::size_t cell = cells[j];
    if (cx.is_edge_cell(cell)) {
      rows[g.edges[cell].ends[1]][j] += 1;
      rows[g.edges[cell].ends[0]][j] -= 1;
    } else {
      rows[g.legs[cx.cell_leg(cell)].vertex][j] -= 1;
    }
  }
  std::vector<Chain> out;
  for (const auto& k : integer_kernel(rows, cells.size())) {
    Chain c(cx.cell_count(), 0);
    for (std::size_t j = 0; j < cells.size(); ++j) c[cells[j]] = k[j];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::size_t> cells_leq(const MarkedDualGraph& g, const CellComplex& cx, const LevelStructure* levels,
                                   int i) {
  std::vector<std::size_t> cells;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (!levels || (levels->level[g.edges[e].ends[0]] <= i && levels->level[g.edges[e].ends[1]] <= i)) {
      cells.push_back(e);
    }
  }
  for (std::size_t k = 0; k < cx.z_legs().size(); ++k) {
    if (!levels || levels->level[g.legs[cx.z_legs()[k]].vertex] <= i) cells.push_back(cx.leg_cell(k));
  }
  return cells;
}

}  // namespace

std::vector<Chain> relative_h1(const MarkedDualGraph& g) {
  CellComplex cx(g);
  return kernel_on_cells(g, cx, cells_leq(g, cx, nullptr, 0));
}

std::size_t rational_rank(const std::vector<Chain>& chains) {
  if (chains.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& c : chains) m.emplace_back(c.begin(), c.end());
  const std::size_t n = m[0].size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < m.size(); ++col) {
    std::size_t sel = r;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][col] == 0) continue;
      Rational f = m[i][col] / m[r][col];
      for (std::size_t j = col; j < n; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

bool in_rational_span(const std::vector<Chain>& generators, const Chain& c) {
  auto with = generators;
  with.push_back(c);
  return rational_rank(with) == rational_rank(generators);
}

const std::vector<Chain>& LevelFiltration::at(int level) const {
  static const std::vector<Chain> empty;
  if (level > 0) return generators.front();
  std::size_t k = static_cast<std::size_t>(-level);
  return k < generators.size() ? generators[k] : empty;
}

std::size_t LevelFiltration::rank_at(int level) const { return rational_rank(at(level)); }

LevelFiltration level_filtration(const MarkedDualGraph& g, const LevelStructure& levels) {
  CellComplex cx(g);
  LevelFiltration f;
  f.ambient_basis = relative_h1(g);
  for (int i = 0; i >= -levels.depth(); --i) {
    f.generators.push_back(kernel_on_cells(g, cx, cells_leq(g, cx, &levels, i)));
  }
  for (const auto& c : f.ambient_basis) {
    int top = 0;
    for (int i = 0; i >= -levels.depth(); --i) {
      if (in_rational_span(f.at(i), c)) top = i;
    }
    f.top_level.push_back(top);
  }
  return f;
}

LevelChain restrict_to_level(const MarkedDualGraph& g, const LevelStructure& levels, const Chain& c, int i) {
  CellComplex cx(g);
  if (c.size() != cx.cell_count()) throw std::invalid_argument("chain has the wrong number of cells");
  LevelChain out;
  out.level = i;
  for (std::size_t cell = 0; cell < c.size(); ++cell) {
    long coeff = c[cell];
    if (coeff == 0) continue;
    if (cx.is_edge_cell(cell)) {
      const Edge& e = g.edges[cell];
      int a = levels.level[e.ends[0]], b = levels.level[e.ends[1]];
      if (a > i || b > i) throw std::invalid_argument("chain uses edge " + e.id + " above level " + std::to_string(i));
      if (a == i && b == i) {
        out.edges[cell] = coeff;
      } else if (a == i) {
        out.half_legs[cell] = coeff;  // leaves the level-i vertex downward
      } else if (b == i) {
        out.half_legs[cell] = -coeff;  // arrives at the level-i vertex from below
      }
    } else {
      std::size_t leg = cx.cell_leg(cell);
      int lv = levels.level[g.legs[leg].vertex];
      if (lv > i) throw std::invalid_argument("chain uses leg " + g.legs[leg].id + " above level " + std::to_string(i));
      if (lv == i) out.legs[leg] = coeff;
    }
  }
  return out;
}

ValueAssignment symbolic_values(const MarkedDualGraph& g, const Decoration& dec) {
  ValueAssignment values;
  for (const auto& p : g.all_points()) {
    if (p.kind == PointRef::Kind::HalfEdge && !dec.orders.count(g.point_id(p))) continue;
    PointOrder o = order_at(g, dec, p);
    if (o.pole) continue;
    std::string id = g.point_id(p);
    if (o.zero) {
      values[id] = LinearForm();
    } else if (auto it = dec.values.find(id); it != dec.values.end()) {
      values[id] = it->second;
    } else {
      values[id] = LinearForm::unknown(value_key(g, p));
    }
  }
  return values;
}

LinearForm evaluate(const MarkedDualGraph& g, const LevelStructure& levels, const LevelChain& chain,
                    const ValueAssignment& values) {
  auto value = [&](const PointRef& p) -> const LinearForm& {
    auto it = values.find(g.point_id(p));
    if (it == values.end()) {
      throw InputError(value_key(g, p), "value of f required at " + g.point_id(p) + " on level " +
                                            std::to_string(chain.level));
    }
    return it->second;
  };
  LinearForm total;
  for (const auto& [e, coeff] : chain.edges) {
    total += value({PointRef::Kind::HalfEdge, e, 0}) * Rational(coeff);
    total -= value({PointRef::Kind::HalfEdge, e, 1}) * Rational(coeff);
  }
  for (const auto& [e, coeff] : chain.half_legs) {
    int side = levels.level[g.edges[e].ends[0]] == chain.level ? 0 : 1;
    total += value({PointRef::Kind::HalfEdge, e, side}) * Rational(coeff);
  }
  for (const auto& [leg, coeff] : chain.legs) {
    total += value({PointRef::Kind::Leg, leg, 0}) * Rational(coeff);
  }
  return total;
}

std::string to_string(Vanishing v) {
  switch (v) {
    case Vanishing::Yes: return "yes";
    case Vanishing::No: return "no";
    case Vanishing::Conditional: return "conditional";
  }
  return "?";
}

const LevelEvaluation& EvaluationSystem::at(int level) const {
  for (const auto& l : levels) {
    if (l.level == level) return l;
  }
  throw std::out_of_range("no level " + std::to_string(level));
}

std::vector<LinearForm> EvaluationSystem::all_forms() const {
  std::vector<LinearForm> out;
  for (const auto& l : levels) out.insert(out.end(), l.forms.begin(), l.forms.end());
  return out;
}

EvaluationSystem evaluation_system(const MarkedDualGraph& g, const LevelStructure& levels,
                                   const ValueAssignment& values) {
  EvaluationSystem sys;
  LevelFiltration filt = level_filtration(g, levels);
  for (int i = 0; i >= -levels.depth(); --i) {
    LevelEvaluation le;
    le.level = i;
    le.generators = filt.at(i);
    for (const auto& c : le.generators) le.forms.push_back(evaluate(g, levels, restrict_to_level(g, levels, c, i), values));
    le.space = AffineSpace::solve(le.forms);
    bool all_zero = std::all_of(le.forms.begin(), le.forms.end(), [](const LinearForm& f) { return f.is_zero(); });
    le.vanishing = all_zero ? Vanishing::Yes : (le.space.consistent() ? Vanishing::Conditional : Vanishing::No);
    sys.levels.push_back(std::move(le));
  }
  return sys;
}

AffineSpace solve_constraints(const EvaluationSystem& sys) {
  auto forms = sys.all_forms();
  return AffineSpace::solve(forms);
}

}  // namespace drclosure

#include "drclosure/hurwitz.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace drclosure {

Partition normalized(Partition p) {
  for (int x : p) {
    if (x < 1) throw std::invalid_argument("partition parts must be positive");
  }
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

Partition cycle_type(const Permutation& s) {
  std::vector<bool> seen(s.size(), false);
  Partition out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(s[j])) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool rh_check(const HurwitzProblem& p) {
  if (p.degree < 1 || p.genus < 0) return false;
  long total = 0;
  for (const auto& prof : p.profiles) {
    if (std::any_of(prof.begin(), prof.end(), [](int x) { return x < 1; })) return false;
    if (std::accumulate(prof.begin(), prof.end(), 0L) != p.degree) return false;
    total += p.degree - static_cast<long>(prof.size());
  }
  return total == 2L * p.degree - 2 + 2L * p.genus;
}

int degree_cap() {
  if (const char* env = std::getenv("DRCLOSURE_HURWITZ_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 10) return static_cast<int>(v);
  }
  return 6;
}

namespace {

// "x then y"
Permutation compose(const Permutation& x, const Permutation& y) {
  Permutation out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = y[static_cast<std::size_t>(x[i])];
  return out;
}

Permutation inverse(const Permutation& x) {
  Permutation out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(x[i])] = static_cast<int>(i);
  return out;
}

// Orbit labels (smallest element of the block) after joining with s.
std::string join_orbits(const std::string& labels, const Permutation& s) {
  std::vector<int> parent(labels.begin(), labels.end());
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    int a = find(static_cast<int>(i)), b = find(s[i]);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::string out(labels.size(), '\0');
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = static_cast<char>(find(static_cast<int>(i)));
  return out;
}

bool transitive(const std::string& labels) {
  return std::all_of(labels.begin(), labels.end(), [](char c) { return c == 0; });
}

std::string encode(const Permutation& s) { return std::string(s.begin(), s.end()); }

Permutation decode(const std::string& key, std::size_t d) {
  return Permutation(key.begin(), key.begin() + static_cast<long>(d));
}

const std::vector<Permutation>& conjugacy_class(int d, const Partition& type) {
  static std::map<std::pair<int, Partition>, std::vector<Permutation>> cache;
  auto key = std::make_pair(d, type);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Permutation> out;
  Permutation s(static_cast<std::size_t>(d));
  std::iota(s.begin(), s.end(), 0);
  do {
    if (cycle_type(s) == type) out.push_back(s);
  } while (std::next_permutation(s.begin(), s.end()));
  return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace

std::optional<std::vector<Permutation>> find_factorization(int degree, const std::vector<Partition>& profiles,
                                                           std::optional<int> cap) {
  if (degree < 1) throw std::invalid_argument("degree must be positive");
  int limit = cap ? *cap : degree_cap();
  if (degree > limit) {
    throw ResourceLimit("Hurwitz degree " + std::to_string(degree) + " exceeds the cap " + std::to_string(limit));
  }
  const std::size_t d = static_cast<std::size_t>(degree);
  std::vector<Partition> types;
  for (const auto& p : profiles) {
    Partition t = normalized(p);
    if (std::accumulate(t.begin(), t.end(), 0L) != degree) return std::nullopt;
    types.push_back(std::move(t));
  }
  Permutation id(d);
  std::iota(id.begin(), id.end(), 0);

  // Non-identity factors: the largest class is fixed up to conjugation, the
  // second largest is determined by the product.
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < types.size(); ++k) {
    if (types[k].size() != d) order.push_back(k);
  }
  auto class_size = [&](std::size_t k) { return conjugacy_class(degree, types[k]).size(); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return class_size(a) > class_size(b); });
  if (order.size() >= 2) std::rotate(order.begin() + 1, order.begin() + 2, order.end());
  if (order.size() >= 3) {
    std::stable_sort(order.begin() + 1, order.end() - 1,
                     [&](std::size_t a, std::size_t b) { return class_size(a) < class_size(b); });
  }

  std::vector<Permutation> found;
  std::string trivial(d, '\0');
  for (std::size_t i = 0; i < d; ++i) trivial[i] = static_cast<char>(i);
  if (order.empty()) {
    if (d != 1) return std::nullopt;
  } else if (order.size() == 1) {
    return std::nullopt;
  } else {
    struct Parent {
      std::string prev;
      std::size_t element;
    };
    using Layer = std::unordered_map<std::string, Parent>;
    std::vector<Layer> layers(1);
    const Permutation& first = conjugacy_class(degree, types[order[0]]).front();
    layers[0][encode(first) + join_orbits(trivial, first)] = {"", 0};
    for (std::size_t k = 1; k + 1 < order.size(); ++k) {
      const auto& cls = conjugacy_class(degree, types[order[k]]);
      Layer next;
      for (const auto& [key, parent] : layers.back()) {
        Permutation pi = decode(key, d);
        std::string labels = key.substr(d);
        for (std::size_t j = 0; j < cls.size(); ++j) {
          std::string nk = encode(compose(pi, cls[j])) + join_orbits(labels, cls[j]);
          next.try_emplace(std::move(nk), Parent{key, j});
        }
      }
      layers.push_back(std::move(next));
    }
    const Partition& last_type = types[order.back()];
    std::vector<std::string> keys;
    for (const auto& [key, parent] : layers.back()) keys.push_back(key);
    std::sort(keys.begin(), keys.end());  // deterministic witness
    for (const auto& key : keys) {
      Permutation last = inverse(decode(key, d));
      if (cycle_type(last) != last_type || !transitive(join_orbits(key.substr(d), last))) continue;
      std::vector<Permutation> tuple(order.size());
      tuple.back() = last;
      std::string cur = key;
      for (std::size_t k = order.size() - 2; k >= 1; --k) {
        const Parent& p = layers[k].at(cur);
        tuple[k] = conjugacy_class(degree, types[order[k]])[p.element];
        cur = p.prev;
      }
      tuple[0] = first;
      found = std::move(tuple);
      break;
    }
    if (found.empty()) return std::nullopt;
  }

  // Braid moves (a, b) -> (b, b^-1 a b) restore the input order; they keep
  // the product, the cycle types and the generated group.
  std::vector<std::size_t> labels = order;
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (std::size_t k = 0; k + 1 < labels.size(); ++k) {
      if (labels[k] < labels[k + 1]) continue;
      Permutation a = found[k], b = found[k + 1];
      found[k] = b;
      found[k + 1] = compose(compose(inverse(b), a), b);
      std::swap(labels[k], labels[k + 1]);
      swapped = true;
    }
  }
  std::vector<Permutation> out(types.size(), id);
  for (std::size_t k = 0; k < labels.size(); ++k) out[labels[k]] = found[k];
  return out;
}

bool exists(const HurwitzProblem& p, std::optional<int> cap) {
  if (!rh_check(p)) return false;
  return find_factorization(p.degree, p.profiles, cap).has_value();
}

HurwitzVerdict decide(const HurwitzProblem& p, std::optional<int> cap) {
  HurwitzVerdict v;
  v.rh = rh_check(p);
  int limit = cap ? *cap : degree_cap();
  if (p.degree > limit) {
    v.cap_hit = true;
    return v;
  }
  v.exists = v.rh && find_factorization(p.degree, p.profiles, limit).has_value();
  return v;
}

ComponentProblem component_problem(const MarkedDualGraph& g, const Decoration& dec, std::size_t vertex,
                                   const ValueAssignment& values, const AffineSpace& solutions) {
  ComponentProblem cp;
  cp.vertex = g.vertices[vertex].id;
  VertexBalance b = vertex_balance(g, dec, vertex);
  const int d = b.degree;
  cp.problem.degree = std::max(d, 1);
  cp.problem.genus = g.vertices[vertex].genus;
  auto fail = [&](std::string reason) {
    cp.feasible = false;
    cp.reason = std::move(reason);
    return cp;
  };
  if (d < 1) return fail("f is constant on this component");
  if (b.zero_mass > d) return fail("zeros exceed the degree");
  if (b.marked_zero && b.zero_mass != d) return fail("zero multiplicities do not add up to the degree");

  Partition zeros, poles;
  struct Point {
    std::string id;
    int mult;
    LinearForm value;
  };
  std::vector<Point> finite;
  for (const auto& p : g.points_on(vertex)) {
    PointOrder o = order_at(g, dec, p);
    std::string id = g.point_id(p);
    if (o.pole) {
      poles.push_back(o.multiplicity());
    } else if (o.zero) {
      zeros.push_back(o.multiplicity());
    } else {
      auto it = values.find(id);
      LinearForm v = it != values.end() ? it->second : LinearForm::unknown(value_key(g, p));
      if (auto c = solutions.constant_value(v); c && *c == 0) {
        return fail("value of f at " + id + " is forced to 0 but the point is not a zero");
      }
      finite.push_back({id, o.multiplicity(), std::move(v)});
    }
  }
  auto pad = [&](Partition p) {
    int sum = std::accumulate(p.begin(), p.end(), 0);
    p.insert(p.end(), static_cast<std::size_t>(d - sum), 1);
    return normalized(std::move(p));
  };
  cp.problem.profiles.push_back(pad(poles));
  cp.problem.profiles.push_back(pad(zeros));

  std::vector<std::size_t> parent(finite.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (std::size_t i = 0; i < finite.size(); ++i) {
    for (std::size_t j = i + 1; j < finite.size(); ++j) {
      auto c = solutions.constant_value(finite[i].value - finite[j].value);
      if (c && *c == 0) parent[find(j)] = find(i);
    }
  }
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (find(i) != i) continue;
    Partition fiber;
    std::vector<std::string> ids;
    for (std::size_t j = 0; j < finite.size(); ++j) {
      if (find(j) != i) continue;
      fiber.push_back(finite[j].mult);
      ids.push_back(finite[j].id);
    }
    if (ids.size() < 2 && fiber[0] == 1) continue;
    if (std::accumulate(fiber.begin(), fiber.end(), 0) > d) {
      return fail("points forced into one fiber exceed the degree");
    }
    cp.problem.profiles.push_back(pad(fiber));
    if (ids.size() >= 2) cp.fibers.push_back(std::move(ids));
  }

  long used = 0;
  for (const auto& p : cp.problem.profiles) used += d - static_cast<long>(p.size());
  long residual = 2L * d - 2 + 2L * cp.problem.genus - used;
  if (residual < 0) return fail("ramification exceeds the Riemann-Hurwitz bound");
  if (residual > 0 && d == 1) return fail("a degree-one map has no ramification");
  Partition simple(static_cast<std::size_t>(d - 1), 1);
  if (d >= 2) simple[0] = 2;
  for (long k = 0; k < residual; ++k) cp.problem.profiles.push_back(simple);
  return cp;
}

int Genus0Realization::degree() const {
  int d = 0;
  for (const auto& p : divisor) {
    if (p.order > 0) d += p.order;
  }
  return d;
}

LinearForm Genus0Realization::value(const std::optional<Rational>& z) const {
  for (const auto& p : divisor) {
    if (p.at != z) continue;
    if (p.order > 0) return LinearForm();
    throw std::domain_error("f has a pole at " + (z ? to_string(*z) : std::string("infinity")));
  }
  Rational product = 1;
  if (z) {
    for (const auto& p : divisor) {
      if (!p.at) continue;
      Rational base = *z - *p.at;
      Rational power = 1;
      for (int k = 0; k < std::abs(p.order); ++k) power *= base;
      product *= p.order > 0 ? power : Rational(1) / power;
    }
  }
  if (scale) return LinearForm(*scale * product);
  return LinearForm::unknown(scale_name) * product;
}

Genus0Realization realize_genus0(std::vector<DivisorPoint> divisor, std::optional<Rational> scale,
                                 std::string scale_name) {
  long total = 0;
  for (std::size_t i = 0; i < divisor.size(); ++i) {
    const auto& p = divisor[i];
    std::string where = p.at ? to_string(*p.at) : "infinity";
    if (p.order == 0) throw InputError(where, "divisor point with order 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (divisor[j].at == p.at) throw InputError(where, "coordinate collision");
    }
    total += p.order;
  }
  if (total != 0) throw InputError("divisor", "degree " + std::to_string(total) + " is not zero");
  if (scale && *scale == 0) throw InputError("scale", "scale must be nonzero");
  return {std::move(divisor), std::move(scale), std::move(scale_name)};
}

}  // namespace drclosure

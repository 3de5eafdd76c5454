#include "gowers/instances.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace gowers {

namespace {

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string set_name(const std::vector<int>& xs) { return "{" + list_key(xs) + "}"; }

int get_int(const json& spec, const char* key, int fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec[key].is_number_integer()) throw SpecInvalid(std::string("field '") + key + "' must be an integer");
  return spec[key].get<int>();
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

// Orders palette entries by rank descending, then by their sorted member lists.
struct PaletteEntry {
  Bits members;
  int rank;
  std::vector<int> list;
  std::string name;
};

void install_palette(SpaceInstance& space, std::vector<PaletteEntry> entries, bool sort_entries) {
  if (sort_entries)
    std::stable_sort(entries.begin(), entries.end(), [](const PaletteEntry& a, const PaletteEntry& b) {
      if (a.rank != b.rank) return a.rank > b.rank;
      return lex_less(a.list, b.list);
    });
  space.members.clear();
  space.rank.clear();
  space.subspace_names.clear();
  for (auto& e : entries) {
    space.members.push_back(std::move(e.members));
    space.rank.push_back(e.rank);
    space.subspace_names.push_back(std::move(e.name));
  }
}

// ---------------------------------------------------------------- Mathias-Silver

std::shared_ptr<PrecompactSystem> singleton_system(int n) {
  auto sys = std::make_shared<PrecompactSystem>();
  sys->name = "singletons-max";
  for (int i = 0; i < n; ++i) {
    sys->family.push_back({i});
    sys->index.emplace(std::to_string(i), i);
  }
  sys->oplus.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sys->oplus[i][j] = std::max(i, j);
  return sys;
}

void ms_points(SpaceInstance& space, int n) {
  for (int x = 0; x < n; ++x) {
    space.point_names.push_back(std::to_string(x));
    space.point_coords.push_back({x});
  }
}

SpacePtr build_ms_min_size(int n, int m, int t, json spec) {
  if (n < 1 || n > 13) throw SpecInvalid("Mathias-Silver universe must be in 1..13 for generated palettes", {{"universe", n}});
  if (m < 1 || m > n) throw SpecInvalid("min_size must be in 1..universe", {{"min_size", m}});
  if (t < 0) throw SpecInvalid("slack must be nonnegative");
  auto space = std::make_shared<SpaceInstance>();
  space->kind = "MathiasSilver";
  space->spec = std::move(spec);
  space->palette_rule = "all-subsets-min-size-" + std::to_string(m);
  space->slack = t;
  ms_points(*space, n);

  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    if (std::popcount(mask) >= m) masks.push_back(mask);
  auto elements = [](std::uint32_t mask) {
    std::vector<int> xs;
    for (int i = 0; mask; ++i, mask >>= 1)
      if (mask & 1u) xs.push_back(i);
    return xs;
  };
  std::vector<std::vector<int>> lists(masks.size());
  std::vector<std::size_t> order(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) lists[i] = elements(masks[i]);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    int ca = std::popcount(masks[a]), cb = std::popcount(masks[b]);
    if (ca != cb) return ca > cb;
    return lex_less(lists[a], lists[b]);
  });
  const int P = static_cast<int>(masks.size());
  std::vector<std::uint32_t> sorted(P);
  std::vector<int> index_of(1u << n, -1);
  for (int i = 0; i < P; ++i) {
    sorted[i] = masks[order[i]];
    index_of[sorted[i]] = i;
    space->subspace_names.push_back(set_name(lists[order[i]]));
    space->rank.push_back(std::popcount(sorted[i]));
    Bits b(n);
    for (int x : lists[order[i]]) b.set(x);
    space->members.push_back(std::move(b));
  }
  space->up.assign(P, Bits(P));
  space->down.assign(P, Bits(P));
  space->star.assign(P, Bits(P));
  for (int p = 0; p < P; ++p) {
    space->by_members.emplace(bits_key(space->members[p]), p);
    for (int q = 0; q < P; ++q) {
      std::uint32_t a = sorted[p], b = sorted[q];
      if ((a & ~b) == 0) {
        space->up[p].set(q);
        space->down[q].set(p);
      }
      if (std::popcount(a & ~b) <= t && std::popcount(a & b) >= m) space->star[p].set(q);
    }
  }
  auto masks_ptr = std::make_shared<std::vector<std::uint32_t>>(sorted);
  auto index_ptr = std::make_shared<std::vector<int>>(std::move(index_of));
  space->meet_fn = [masks_ptr, index_ptr](const SpaceInstance& self, SubspaceId p, SubspaceId q) -> std::optional<SubspaceId> {
    if (!self.le_star(p, q)) return std::nullopt;
    int r = (*index_ptr)[(*masks_ptr)[p] & (*masks_ptr)[q]];
    if (r < 0) return std::nullopt;
    return r;
  };
  space->fusion_fn = [masks_ptr, index_ptr](const SpaceInstance& self, const std::vector<SubspaceId>& chain) -> std::optional<SubspaceId> {
    std::uint32_t common = (*masks_ptr)[chain[0]];
    for (auto c : chain) common &= (*masks_ptr)[c];
    int r = (*index_ptr)[common];
    if (r < 0) return std::nullopt;  // intersection fell below the minimum size
    for (auto c : chain)
      if (!self.le_star(r, c)) return std::nullopt;
    return r;
  };
  space->system = singleton_system(n);
  return space;
}

SpacePtr build_ms_explicit(int n, int m, int t, const json& sets, json spec) {
  if (n < 1) throw SpecInvalid("universe must be positive");
  auto space = std::make_shared<SpaceInstance>();
  space->kind = "MathiasSilver";
  space->spec = std::move(spec);
  space->palette_rule = "explicit";
  space->slack = t;
  ms_points(*space, n);
  std::vector<PaletteEntry> entries;
  std::set<std::vector<int>> seen;
  for (const auto& s : sets) {
    auto xs = s.get<std::vector<int>>();
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.empty()) throw SpecInvalid("explicit palette sets must be nonempty");
    for (int x : xs)
      if (x < 0 || x >= n) throw SpecInvalid("explicit palette element outside the universe", {{"set", xs}});
    if (!seen.insert(xs).second) throw SpecInvalid("duplicate palette set", {{"set", xs}});
    entries.push_back({bits_from_list(n, xs), static_cast<int>(xs.size()), xs, set_name(xs)});
  }
  if (entries.empty()) throw SpecInvalid("explicit palette is empty");
  install_palette(*space, std::move(entries), false);
  finalize_point_space(*space, false);
  const int P = space->num_subspaces();
  space->star.assign(P, Bits(P));
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q) {
      Bits common = space->members[p] & space->members[q];
      auto lacking = (space->members[p] - space->members[q]).count();
      if (static_cast<int>(lacking) > t || static_cast<int>(common.count()) < m) continue;
      if (!space->find_by_members(common))
        throw PaletteNotClosedUnderMeet("explicit palette lacks the intersection of two palette sets",
                                        {{"p", space->subspace_names[p]}, {"q", space->subspace_names[q]}});
      space->star[p].set(q);
    }
  space->system = singleton_system(n);
  return space;
}

// ---------------------------------------------------------------- finite fields

struct Field {
  int q, d, size;
  std::vector<std::vector<int>> digit_table;

  Field(int q_, int d_) : q(q_), d(d_), size(1) {
    for (int i = 0; i < d; ++i) size *= q;
    digit_table.resize(size);
    for (int c = 0; c < size; ++c) {
      std::vector<int> digits(d);
      int v = c;
      for (int i = d - 1; i >= 0; --i) {
        digits[i] = v % q;
        v /= q;
      }
      digit_table[c] = digits;
    }
  }
  const std::vector<int>& digits(int code) const { return digit_table[code]; }
  int encode(const std::vector<int>& digits) const {
    int c = 0;
    for (int i = 0; i < d; ++i) c = c * q + digits[i];
    return c;
  }
  int add(int a, int b) const {
    std::vector<int> out(d);
    for (int i = 0; i < d; ++i) out[i] = (digit_table[a][i] + digit_table[b][i]) % q;
    return encode(out);
  }
  int scale(int c, int a) const {
    std::vector<int> out(d);
    for (int i = 0; i < d; ++i) out[i] = (c * digit_table[a][i]) % q;
    return encode(out);
  }
  int normalize(int a) const {
    int lead = 0;
    for (int i = 0; i < d && !lead; ++i) lead = digit_table[a][i];
    if (!lead) return 0;
    int inv = 1;
    while ((inv * lead) % q != 1) ++inv;
    return scale(inv, a);
  }
  int min_supp(int a) const {
    for (int i = 0; i < d; ++i)
      if (digit_table[a][i]) return i;
    return d;
  }
  int max_supp(int a) const {
    for (int i = d - 1; i >= 0; --i)
      if (digit_table[a][i]) return i;
    return -1;
  }
  Bits span(const std::vector<int>& generators) const {
    Bits s(size);
    s.set(0);
    for (int g : generators) {
      Bits next = s;
      for (auto v = s.find_first(); v != Bits::npos; v = s.find_next(v))
        for (int c = 1; c < q; ++c) next.set(add(static_cast<int>(v), scale(c, g)));
      s = next;
    }
    return s;
  }
  Bits span_union(const Bits& a, const Bits& b) const {
    Bits s(size);
    for (auto u = a.find_first(); u != Bits::npos; u = a.find_next(u))
      for (auto w = b.find_first(); w != Bits::npos; w = b.find_next(w)) s.set(add(static_cast<int>(u), static_cast<int>(w)));
    return s;
  }
  int dim_of(const Bits& s) const {
    int n = static_cast<int>(s.count()), k = 0;
    while (n > 1) {
      n /= q;
      ++k;
    }
    return k;
  }
  std::string vec_name(int code) const {
    std::string s;
    for (int x : digit_table[code]) s += std::to_string(x);
    return s;
  }
  std::vector<int> basis(const Bits& s) const {
    std::vector<int> chosen;
    Bits current = span({});
    for (auto v = s.find_first(); v != Bits::npos; v = s.find_next(v)) {
      if (current.test(v)) continue;
      chosen.push_back(static_cast<int>(v));
      current = span(chosen);
    }
    return chosen;
  }
};

std::shared_ptr<PrecompactSystem> finite_field_system(const Field& f) {
  std::vector<Bits> subspaces;
  std::set<std::string> seen;
  std::vector<int> queue_start;
  for (int v = 1; v < f.size; ++v) {
    if (f.normalize(v) != v) continue;
    Bits s = f.span({v});
    if (seen.insert(bits_key(s)).second) subspaces.push_back(s);
  }
  for (std::size_t i = 0; i < subspaces.size(); ++i)
    for (int v = 1; v < f.size; ++v) {
      if (subspaces[i].test(v) || f.normalize(v) != v) continue;
      Bits s = f.span_union(subspaces[i], f.span({v}));
      if (seen.insert(bits_key(s)).second) subspaces.push_back(s);
    }
  std::vector<std::vector<int>> lists;
  for (auto& s : subspaces) {
    std::vector<int> xs;
    for (auto v = s.find_first(); v != Bits::npos; v = s.find_next(v))
      if (v) xs.push_back(static_cast<int>(v) - 1);
    lists.push_back(xs);
  }
  std::vector<std::size_t> order(lists.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (lists[a].size() != lists[b].size()) return lists[a].size() > lists[b].size();
    return lex_less(lists[a], lists[b]);
  });
  auto sys = std::make_shared<PrecompactSystem>();
  sys->name = "finite-field-subspaces";
  std::vector<Bits> sorted;
  for (auto i : order) {
    sys->index.emplace(list_key(lists[i]), static_cast<int>(sys->family.size()));
    sys->family.push_back(lists[i]);
    sorted.push_back(subspaces[i]);
  }
  std::map<std::string, int> by_bits;
  for (std::size_t i = 0; i < sorted.size(); ++i) by_bits.emplace(bits_key(sorted[i]), static_cast<int>(i));
  const int F = static_cast<int>(sorted.size());
  sys->oplus.assign(F, std::vector<int>(F));
  for (int a = 0; a < F; ++a)
    for (int b = a; b < F; ++b) {
      int c = by_bits.at(bits_key(f.span_union(sorted[a], sorted[b])));
      sys->oplus[a][b] = sys->oplus[b][a] = c;
    }
  return sys;
}

SpacePtr build_rosendal(int q, int d, int t, const std::string& rule, bool projective, int min_dim,
                        const json& generators, json spec) {
  if (!is_prime(q)) throw SpecInvalid("field order must be prime", {{"field", q}});
  if (d < 1) throw SpecInvalid("dimension must be positive");
  Field f(q, d);
  if (f.size > 4096) throw SpecInvalid("field size to the dimension exceeds 4096", {{"size", f.size}});
  if (t < 0) throw SpecInvalid("slack must be nonnegative");
  if (min_dim < 1 || min_dim > d) throw SpecInvalid("min_dim must be in 1..dim");
  auto space = std::make_shared<SpaceInstance>();
  space->kind = projective ? "ProjectiveRosendal" : "Rosendal";
  space->spec = std::move(spec);
  space->palette_rule = rule + (min_dim > 1 ? "-min-dim-" + std::to_string(min_dim) : "");
  space->slack = t;

  std::vector<int> point_of(f.size, -1);
  for (int v = 1; v < f.size; ++v) {
    if (projective && f.normalize(v) != v) continue;
    point_of[v] = space->num_points();
    space->point_names.push_back(projective ? "[" + f.vec_name(v) + "]" : f.vec_name(v));
    space->point_coords.push_back(f.digits(v));
  }
  auto members_of = [&](const Bits& s) {
    Bits m(space->num_points());
    for (auto v = s.find_first(); v != Bits::npos; v = s.find_next(v)) {
      if (v == 0) continue;
      int c = projective ? f.normalize(static_cast<int>(v)) : static_cast<int>(v);
      m.set(point_of[c]);
    }
    return m;
  };

  std::vector<Bits> spans;
  std::set<std::string> seen;
  auto add_span = [&](const Bits& s) {
    if (f.dim_of(s) < min_dim) return false;
    if (!seen.insert(bits_key(s)).second) return false;
    spans.push_back(s);
    return true;
  };
  auto unit = [&](int i) {
    std::vector<int> digits(d, 0);
    digits[i] = 1;
    return f.encode(digits);
  };
  std::vector<int> normalized;
  for (int v = 1; v < f.size; ++v)
    if (f.normalize(v) == v) normalized.push_back(v);

  if (rule == "explicit") {
    if (!generators.is_array() || generators.empty()) throw SpecInvalid("explicit palette needs generator lists");
    for (const auto& g : generators) {
      std::vector<int> codes;
      for (const auto& vec : g) {
        auto digits = vec.get<std::vector<int>>();
        if (static_cast<int>(digits.size()) != d) throw SpecInvalid("generator has wrong length", {{"vector", digits}});
        for (auto& x : digits) x = ((x % q) + q) % q;
        codes.push_back(f.encode(digits));
      }
      Bits s = f.span(codes);
      if (f.dim_of(s) < 1) throw SpecInvalid("explicit palette element is the zero subspace");
      add_span(s);
    }
    for (std::size_t i = 0; i < spans.size(); ++i)
      for (std::size_t j = i + 1; j < spans.size(); ++j) {
        Bits common = spans[i] & spans[j];
        if (f.dim_of(common) >= min_dim && !seen.count(bits_key(common)))
          throw PaletteNotClosedUnderMeet("explicit palette is not closed under intersection",
                                          {{"p", i}, {"q", j}});
      }
  } else {
    if (rule != "tail" && rule != "tail-2block" && rule != "all-block")
      throw SpecInvalid("unknown Rosendal palette rule '" + rule + "'");
    for (int k = 0; k < d; ++k) {
      std::vector<int> gens;
      for (int i = k; i < d; ++i) gens.push_back(unit(i));
      add_span(f.span(gens));
    }
    if (rule != "tail") {
      int max_len = rule == "all-block" ? d : 2;
      // Block sequences x_0 < x_1 < ... of normalized vectors, extended by support.
      std::vector<std::vector<int>> frontier;
      for (int v : normalized) frontier.push_back({v});
      for (int len = 1; len <= max_len && !frontier.empty(); ++len) {
        std::vector<std::vector<int>> next;
        for (auto& seq : frontier) {
          add_span(f.span(seq));
          if (len == max_len) continue;
          for (int v : normalized)
            if (f.min_supp(v) > f.max_supp(seq.back())) {
              auto ext = seq;
              ext.push_back(v);
              next.push_back(std::move(ext));
            }
        }
        frontier = std::move(next);
      }
      for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t i = 0; i < spans.size(); ++i)
          for (std::size_t j = i + 1; j < spans.size(); ++j)
            if (add_span(spans[i] & spans[j])) grew = true;
      }
    }
  }

  std::vector<PaletteEntry> entries;
  for (auto& s : spans) {
    PaletteEntry e;
    e.members = members_of(s);
    e.rank = f.dim_of(s);
    e.list = bits_list(e.members);
    std::string name = "span(";
    auto basis = f.basis(s);
    for (std::size_t i = 0; i < basis.size(); ++i) name += (i ? "," : "") + f.vec_name(basis[i]);
    e.name = name + ")";
    entries.push_back(std::move(e));
  }
  install_palette(*space, std::move(entries), rule != "explicit");
  finalize_point_space(*space);
  if (!projective && f.size <= 16) space->system = finite_field_system(f);
  return space;
}

// ---------------------------------------------------------------- grid sphere

int rank_of(std::vector<std::vector<Rational>> rows) {
  int r = 0;
  const int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    int pivot = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][c].numerator() != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][c].numerator() == 0) continue;
      Rational factor = rows[i][c] / rows[r][c];
      for (int k = c; k < cols; ++k) rows[i][k] -= factor * rows[r][k];
    }
    ++r;
  }
  return r;
}

SpacePtr build_grid_sphere(int dim, int n, int t, json spec) {
  if (dim < 1 || dim > 3) throw SpecInvalid("GridSphere dimension must be 1..3");
  if (n < 1 || n > 40) throw SpecInvalid("grid step must be 1/n with n in 1..40");
  if (t < 0) throw SpecInvalid("slack must be nonnegative");
  auto space = std::make_shared<SpaceInstance>();
  space->kind = "GridSphere";
  space->spec = std::move(spec);
  space->palette_rule = "tail-2block";
  space->slack = t;

  std::vector<std::vector<int>> pts;
  std::vector<int> cur(dim, -n);
  while (true) {
    int sup = 0;
    for (int x : cur) sup = std::max(sup, std::abs(x));
    if (sup == n) pts.push_back(cur);
    int i = dim - 1;
    while (i >= 0 && cur[i] == n) cur[i--] = -n;
    if (i < 0) break;
    ++cur[i];
  }
  const int X = static_cast<int>(pts.size());
  for (auto& p : pts) {
    std::vector<Rational> vals;
    std::string name = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
      vals.emplace_back(p[i], n);
      name += (i ? "," : "") + format_rational(vals.back());
    }
    space->point_names.push_back(name + ")");
    space->point_values.push_back(vals);
    space->point_coords.push_back(p);
  }
  space->distance.assign(X, std::vector<Rational>(X));
  for (int a = 0; a < X; ++a)
    for (int b = 0; b < X; ++b) {
      int sup = 0;
      for (int i = 0; i < dim; ++i) sup = std::max(sup, std::abs(pts[a][i] - pts[b][i]));
      space->distance[a][b] = Rational(sup, n);
    }

  auto as_row = [](const std::vector<int>& v) {
    std::vector<Rational> r;
    for (int x : v) r.emplace_back(x);
    return r;
  };
  auto members_of_span = [&](const std::vector<std::vector<int>>& basis) {
    std::vector<std::vector<Rational>> rows;
    for (auto& b : basis) rows.push_back(as_row(b));
    int base = rank_of(rows);
    Bits m(X);
    for (int x = 0; x < X; ++x) {
      auto extended = rows;
      extended.push_back(as_row(pts[x]));
      if (rank_of(extended) == base) m.set(x);
    }
    return m;
  };
  auto rank_of_members = [&](const Bits& m) {
    std::vector<std::vector<Rational>> rows;
    for (auto x = m.find_first(); x != Bits::npos; x = m.find_next(x)) rows.push_back(as_row(pts[x]));
    return rank_of(rows);
  };
  auto min_supp = [&](const std::vector<int>& v) {
    for (int i = 0; i < dim; ++i)
      if (v[i]) return i;
    return dim;
  };
  auto max_supp = [&](const std::vector<int>& v) {
    for (int i = dim - 1; i >= 0; --i)
      if (v[i]) return i;
    return -1;
  };

  std::vector<Bits> sets;
  std::set<std::string> seen;
  auto add = [&](const Bits& m) {
    if (m.none() || !seen.insert(bits_key(m)).second) return false;
    sets.push_back(m);
    return true;
  };
  for (int k = 0; k < dim; ++k) {
    std::vector<std::vector<int>> basis;
    for (int i = k; i < dim; ++i) {
      std::vector<int> e(dim, 0);
      e[i] = 1;
      basis.push_back(e);
    }
    add(members_of_span(basis));
  }
  for (int x = 0; x < X; ++x) add(members_of_span({pts[x]}));
  for (int x = 0; x < X; ++x)
    for (int y = 0; y < X; ++y)
      if (max_supp(pts[x]) < min_supp(pts[y])) add(members_of_span({pts[x], pts[y]}));
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = i + 1; j < sets.size(); ++j)
        if (add(sets[i] & sets[j])) grew = true;
  }
  std::vector<PaletteEntry> entries;
  for (auto& m : sets) {
    PaletteEntry e;
    e.members = m;
    e.rank = rank_of_members(m);
    e.list = bits_list(m);
    if (e.rank == dim) {
      e.name = "E";
    } else {
      e.name = "span" + space->point_names[e.list.back()];
      if (e.rank > 1) e.name = "span" + std::to_string(e.rank) + "{" + space->point_names[e.list.front()] + ",...}";
    }
    entries.push_back(std::move(e));
  }
  install_palette(*space, std::move(entries), true);
  finalize_point_space(*space);
  return space;
}

}  // namespace

SpacePtr make_mathias_silver(int universe, int min_size, int slack) {
  return build_ms_min_size(universe, min_size, slack,
                           json{{"kind", "MathiasSilver"}, {"universe", universe}, {"min_size", min_size}, {"slack", slack}});
}

SpacePtr make_rosendal(int field, int dim, int slack, const std::string& palette, bool projective, int min_dim) {
  json spec{{"kind", projective ? "ProjectiveRosendal" : "Rosendal"},
            {"field", field},
            {"dim", dim},
            {"slack", slack},
            {"palette", palette}};
  if (min_dim != 1) spec["min_dim"] = min_dim;
  return build_rosendal(field, dim, slack, palette, projective, min_dim, json(), spec);
}

SpacePtr make_grid_sphere(int dim, int steps_per_unit, int slack) {
  return build_grid_sphere(dim, steps_per_unit, slack,
                           json{{"kind", "GridSphere"}, {"dim", dim}, {"step", "1/" + std::to_string(steps_per_unit)}, {"slack", slack}});
}

SpacePtr make_single_subspace(int num_points) {
  if (num_points < 1) throw SpecInvalid("need at least one point");
  auto space = std::make_shared<SpaceInstance>();
  space->kind = "SingleSubspace";
  space->spec = json{{"kind", "SingleSubspace"}, {"points", num_points}};
  space->palette_rule = "single";
  for (int x = 0; x < num_points; ++x) {
    space->point_names.push_back(std::to_string(x));
    space->point_coords.push_back({x});
  }
  Bits all(num_points);
  all.set();
  space->members = {all};
  space->rank = {num_points};
  space->subspace_names = {"1"};
  finalize_point_space(*space);
  return space;
}

SpacePtr build_instance(const json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    throw SpecInvalid("instance spec needs a string 'kind'");
  const std::string kind = spec["kind"];
  const int t = get_int(spec, "slack", 1);
  if (kind == "MathiasSilver") {
    const int n = get_int(spec, "universe", -1);
    const int m = get_int(spec, "min_size", 1);
    if (spec.contains("palette") && spec["palette"].is_object()) {
      const auto& pal = spec["palette"];
      if (pal.value("rule", "") != "explicit" || !pal.contains("sets"))
        throw SpecInvalid("object palettes must be {\"rule\":\"explicit\",\"sets\":[...]}");
      return build_ms_explicit(n, m, t, pal["sets"], spec);
    }
    if (spec.contains("palette") && spec["palette"] != "min-size")
      throw SpecInvalid("unknown Mathias-Silver palette rule", {{"palette", spec["palette"]}});
    return build_ms_min_size(n, m, t, spec);
  }
  if (kind == "Rosendal" || kind == "ProjectiveRosendal") {
    std::string rule = "tail-2block";
    json generators;
    if (spec.contains("palette")) {
      if (spec["palette"].is_string()) {
        rule = spec["palette"];
      } else if (spec["palette"].is_object() && spec["palette"].value("rule", "") == "explicit") {
        rule = "explicit";
        generators = spec["palette"].value("generators", json());
      } else {
        throw SpecInvalid("unknown Rosendal palette", {{"palette", spec["palette"]}});
      }
    }
    return build_rosendal(get_int(spec, "field", -1), get_int(spec, "dim", -1), t, rule,
                          kind == "ProjectiveRosendal", get_int(spec, "min_dim", 1), generators, spec);
  }
  if (kind == "GridSphere") {
    Rational step = rational_from_json(spec.value("step", json("1/4")));
    if (step <= 0 || step.numerator() != 1) throw SpecInvalid("grid step must have the form 1/n");
    return build_grid_sphere(get_int(spec, "dim", 2), static_cast<int>(step.denominator()), t, spec);
  }
  if (kind == "SingleSubspace") return make_single_subspace(get_int(spec, "points", 2));
  throw SpecInvalid("unknown instance kind '" + kind + "'");
}

SubspaceId ms_subspace(const SpaceInstance& space, const std::vector<int>& elements) {
  Bits m(space.num_points());
  for (int x : elements) {
    if (x < 0 || x >= space.num_points()) throw SpecInvalid("element outside the universe", {{"element", x}});
    m.set(x);
  }
  auto found = space.find_by_members(m);
  if (!found) throw SpecInvalid("set is not in the palette", {{"set", elements}});
  return *found;
}

SubspaceId resolve_subspace(const SpaceInstance& space, const json& ref) {
  if (ref.is_null()) return 0;
  if (ref.is_number_integer()) {
    int id = ref.get<int>();
    if (id < 0 || id >= space.num_subspaces()) throw SpecInvalid("subspace id out of range", {{"id", id}});
    return id;
  }
  if (ref.is_string()) {
    const std::string name = ref;
    if (name == "all" || name == "root" || name == "E") return 0;
    for (int p = 0; p < space.num_subspaces(); ++p)
      if (space.subspace_names[p] == name) return p;
    throw SpecInvalid("unknown subspace name '" + name + "'");
  }
  if (ref.is_array()) return ms_subspace(space, ref.get<std::vector<int>>());
  throw SpecInvalid("cannot resolve subspace reference", {{"ref", ref}});
}

int first_nonzero_index(const std::vector<int>& coords) {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i]) return static_cast<int>(i);
  return -1;
}

int last_nonzero_index(const std::vector<int>& coords) {
  for (int i = static_cast<int>(coords.size()) - 1; i >= 0; --i)
    if (coords[i]) return i;
  return -1;
}

PigeonholeResult pigeonhole(const PigeonholeProvider& provider, const SpaceInstance& space, const History& s,
                            const Bits& A, SubspaceId p, std::optional<Rational> delta) {
  Bits expanded;
  if (provider.approximate) {
    if (!space.has_metric()) throw NoMetric("approximate pigeonhole needs a metric");
    if (!delta) throw SpecInvalid("approximate pigeonhole needs a delta");
    expanded = Bits(space.num_points());
    for (PointId x = 0; x < space.num_points(); ++x)
      for (auto a = A.find_first(); a != Bits::npos; a = A.find_next(a))
        if (space.dist(x, static_cast<PointId>(a)) <= *delta) {
          expanded.set(x);
          break;
        }
  }
  json witnesses = json::array();
  const Bits& below = space.down[p];
  for (auto q = below.find_first(); q != Bits::npos; q = below.find_next(q)) {
    Bits admitted(space.num_points());
    if (provider.approximate || space.point_only) {
      admitted = space.members[q];
    } else {
      for (PointId x : space.admissible(s, static_cast<SubspaceId>(q))) admitted.set(x);
    }
    if (provider.approximate) {
      if (!admitted.intersects(A)) return {static_cast<SubspaceId>(q), false};
      if (admitted.is_subset_of(expanded)) return {static_cast<SubspaceId>(q), true};
    } else {
      if (admitted.is_subset_of(A)) return {static_cast<SubspaceId>(q), true};
      if (!admitted.intersects(A)) return {static_cast<SubspaceId>(q), false};
    }
    if (witnesses.size() < 16) {
      Bits inside = admitted & A;
      Bits outside = admitted - (provider.approximate ? expanded : A);
      witnesses.push_back({{"q", space.subspace_names[q]},
                           {"in_A", space.point_names[inside.find_first()]},
                           {"outside", space.point_names[outside.find_first()]}});
    }
  }
  throw PigeonholeUnavailable("no palette subspace below p decides the set",
                              {{"p", space.subspace_names[p]}, {"scanned", below.count()}, {"witnesses", witnesses}});
}

Bits counterexample_set(const SpaceInstance& space, const std::string& which) {
  Bits A(space.num_points());
  if (which == "FirstCoordOne") {
    if (space.kind != "Rosendal") throw KindMismatch("FirstCoordOne needs a Rosendal instance");
    for (PointId x = 0; x < space.num_points(); ++x) {
      const auto& c = space.point_coords[x];
      if (c[first_nonzero_index(c)] == 1) A.set(x);
    }
    return A;
  }
  if (which == "ProjectiveFirstLast") {
    if (space.kind != "ProjectiveRosendal") throw KindMismatch("ProjectiveFirstLast needs a ProjectiveRosendal instance");
    for (PointId x = 0; x < space.num_points(); ++x) {
      const auto& c = space.point_coords[x];
      if (c[first_nonzero_index(c)] == c[last_nonzero_index(c)]) A.set(x);
    }
    return A;
  }
  throw SpecInvalid("unknown counterexample set '" + which + "'");
}

json scan_meets_both(const SpaceInstance& space, const Bits& A, int min_rank) {
  int scanned = 0, skipped = 0;
  json failures = json::array();
  for (int q = 0; q < space.num_subspaces(); ++q) {
    if (space.rank[q] < min_rank) {
      ++skipped;
      continue;
    }
    ++scanned;
    const Bits& m = space.members[q];
    if (!m.intersects(A) || m.is_subset_of(A)) failures.push_back(space.subspace_names[q]);
  }
  return json{{"scanned", scanned},
              {"skipped_below_min_rank", skipped},
              {"min_rank", min_rank},
              {"failures", failures},
              {"meets_both_everywhere", failures.empty()}};
}

json pigeonhole_scan_everywhere(const SpaceInstance& space, const Bits& A) {
  PigeonholeProvider provider;
  json available = json::array();
  for (int p = 0; p < space.num_subspaces(); ++p) {
    try {
      auto r = pigeonhole(provider, space, {}, A, p);
      available.push_back({{"p", space.subspace_names[p]}, {"q", space.subspace_names[r.q]}});
    } catch (const PigeonholeUnavailable&) {
    }
  }
  return json{{"palette_size", space.num_subspaces()},
              {"available_below", available},
              {"pigeonhole", available.empty() ? "unavailable_everywhere" : "available_somewhere"}};
}

json block_pair_scan(const SpaceInstance& space, const Payoff& payoff, int min_rank) {
  if (space.point_coords.empty() || space.kind != "Rosendal") throw KindMismatch("block pairs need a Rosendal instance");
  int scanned = 0;
  json all_inside = json::array();
  json witnesses = json::array();
  for (int y = 0; y < space.num_subspaces(); ++y) {
    if (space.rank[y] < min_rank) continue;
    ++scanned;
    const auto pts = bits_list(space.members[y]);
    std::optional<std::pair<int, int>> witness;
    for (int a : pts) {
      for (int b : pts) {
        if (last_nonzero_index(space.point_coords[a]) >= first_nonzero_index(space.point_coords[b])) continue;
        if (!payoff.accepts({a, b})) {
          witness = std::make_pair(a, b);
          break;
        }
      }
      if (witness) break;
    }
    if (!witness) {
      all_inside.push_back(space.subspace_names[y]);
    } else if (witnesses.size() < 8) {
      witnesses.push_back({{"subspace", space.subspace_names[y]},
                           {"x0", space.point_names[witness->first]},
                           {"x1", space.point_names[witness->second]}});
    }
  }
  return json{{"scanned", scanned},
              {"min_rank", min_rank},
              {"subspaces_with_all_pairs_inside", all_inside},
              {"sample_witnesses", witnesses},
              {"no_subspace_inside", all_inside.empty()}};
}

}  // namespace gowers

#include "abpkit/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <boost/multiprecision/cpp_int.hpp>

#include "abpkit/errors.hpp"
#include "abpkit/rng.hpp"

namespace abpkit {

Partition::Partition(std::vector<Side> side, std::vector<int> slot) : side_(std::move(side)), slot_(std::move(slot)) {
  const int n = nvars();
  if (slot_.size() != side_.size()) throw DimensionError("partition side and slot lists differ in length");
  if (n % 2 != 0) throw DimensionError("partition needs an even number of variables");
  if (n > kMaxVars) throw DimensionError("too many variables");
  std::vector<char> y_hit(static_cast<std::size_t>(n / 2), 0), z_hit(static_cast<std::size_t>(n / 2), 0);
  for (int v = 1; v <= n; ++v) {
    const int s = slot_[static_cast<std::size_t>(v - 1)];
    if (s < 1 || s > n / 2) throw ValidationError("partition slot out of range");
    auto& hit = side_[static_cast<std::size_t>(v - 1)] == Side::Y ? y_hit : z_hit;
    if (hit[static_cast<std::size_t>(s - 1)]) throw ValidationError("partition is not injective");
    hit[static_cast<std::size_t>(s - 1)] = 1;
    (side_[static_cast<std::size_t>(v - 1)] == Side::Y ? y_ : z_) |= var_bit(v);
  }
}

std::pair<std::uint32_t, std::uint32_t> Partition::split(Monomial mono) const {
  std::uint32_t y = 0, z = 0;
  while (mono) {
    const int v = __builtin_ctzll(mono) + 1;
    mono &= mono - 1;
    const std::uint32_t bit = std::uint32_t{1} << (slot_[static_cast<std::size_t>(v - 1)] - 1);
    (side_[static_cast<std::size_t>(v - 1)] == Side::Y ? y : z) |= bit;
  }
  return {y, z};
}

Partition sample_partition(int nvars, std::uint64_t seed) {
  if (nvars % 2 != 0 || nvars < 0) throw DimensionError("partition needs an even number of variables");
  // A uniform permutation read as y_1..y_m, z_1..z_m is uniform over partitions.
  std::vector<int> order(static_cast<std::size_t>(nvars));
  std::iota(order.begin(), order.end(), 1);
  Rng rng(seed);
  rng.shuffle(order);
  return partition_from_permutation(Permutation(std::move(order)));
}

Partition partition_from_permutation(const Permutation& pi) {
  const int n = pi.size();
  if (n % 2 != 0) throw DimensionError("partition needs an even number of variables");
  std::vector<Side> side(static_cast<std::size_t>(n));
  std::vector<int> slot(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const auto v = static_cast<std::size_t>(pi.at(i) - 1);
    side[v] = i <= n / 2 ? Side::Y : Side::Z;
    slot[v] = i <= n / 2 ? i : i - n / 2;
  }
  return Partition(std::move(side), std::move(slot));
}

PDMatrix build_pdm(const MultilinearPoly& f, const Partition& phi, int max_vars) {
  if (f.nvars() != phi.nvars()) throw DimensionError("polynomial and partition disagree on n");
  if (f.nvars() > max_vars) throw BudgetExceeded("partial derivative matrix too large", 0);
  PDMatrix m{phi.m(), f.field(), {}};
  m.entries.assign(m.dim() * m.dim(), Fe{0});
  for (const Term& t : f.terms()) {
    const auto [y, z] = phi.split(t.mono);
    m.entries[y * m.dim() + z] = t.coeff;
  }
  return m;
}

namespace {

int rank_mod_p(std::vector<std::vector<Fe>> rows, const PrimeField& F) {
  int r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    std::size_t piv = static_cast<std::size_t>(r);
    while (piv < rows.size() && rows[piv][c].v == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(r)]);
    auto& pr = rows[static_cast<std::size_t>(r)];
    const Fe inv = F.inv(pr[c]);
    for (std::size_t j = c; j < cols; ++j) pr[j] = F.mul(pr[j], inv);
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < rows.size(); ++i) {
      const Fe factor = rows[i][c];
      if (factor.v == 0) continue;
      for (std::size_t j = c; j < cols; ++j) rows[i][j] = F.sub(rows[i][j], F.mul(factor, pr[j]));
    }
    ++r;
  }
  return r;
}

// Compressed matrix: only Y-masks and Z-masks that occur in some term.
template <typename T, typename Conv>
std::vector<std::vector<T>> compressed(const MultilinearPoly& f, const Partition& phi, T zero, Conv conv) {
  std::map<std::uint32_t, std::size_t> row_of, col_of;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> split;
  split.reserve(f.size());
  for (const Term& t : f.terms()) {
    split.push_back(phi.split(t.mono));
    row_of.emplace(split.back().first, 0);
    col_of.emplace(split.back().second, 0);
  }
  std::size_t i = 0;
  for (auto& [k, v] : row_of) v = i++;
  i = 0;
  for (auto& [k, v] : col_of) v = i++;
  std::vector<std::vector<T>> rows(row_of.size(), std::vector<T>(col_of.size(), zero));
  for (std::size_t t = 0; t < f.size(); ++t) {
    rows[row_of[split[t].first]][col_of[split[t].second]] = conv(f.terms()[t].coeff);
  }
  return rows;
}

}  // namespace

int rank(const PDMatrix& m) {
  const std::size_t d = m.dim();
  std::vector<char> col_used(d, 0);
  std::vector<std::vector<Fe>> rows;
  for (std::size_t r = 0; r < d; ++r) {
    bool nz = false;
    for (std::size_t c = 0; c < d; ++c) {
      if (m.entries[r * d + c].v) {
        nz = true;
        col_used[c] = 1;
      }
    }
    if (nz) rows.emplace_back(m.entries.begin() + static_cast<std::ptrdiff_t>(r * d),
                              m.entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
  }
  for (auto& row : rows) {
    std::vector<Fe> packed;
    for (std::size_t c = 0; c < d; ++c) {
      if (col_used[c]) packed.push_back(row[c]);
    }
    row = std::move(packed);
  }
  return rank_mod_p(std::move(rows), m.field);
}

int rank_phi(const MultilinearPoly& f, const Partition& phi) {
  if (f.nvars() != phi.nvars()) throw DimensionError("polynomial and partition disagree on n");
  return rank_mod_p(compressed(f, phi, Fe{0}, [](Fe c) { return c; }), f.field());
}

int rank_rational(const MultilinearPoly& f, const Partition& phi) {
  using boost::multiprecision::cpp_int;
  if (f.nvars() != phi.nvars()) throw DimensionError("polynomial and partition disagree on n");
  if (f.nvars() > 12) throw BudgetExceeded("exact rational rank limited to n <= 12", 0);
  const PrimeField& F = f.field();
  auto a = compressed(f, phi, cpp_int(0), [&](Fe c) { return cpp_int(F.centered(c)); });
  // Bareiss: every division below is exact.
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  cpp_int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

Chromatic chromatic_class(Monomial s, const Partition& phi) {
  return (s & phi.y_vars()) && (s & phi.z_vars()) ? Chromatic::Bichromatic : Chromatic::Monochromatic;
}

}  // namespace abpkit

#include "ordlab/epset.hpp"

#include <numeric>
#include <sstream>

#include "ordlab/error.hpp"

namespace ordlab {

namespace {

constexpr std::uint64_t kPeriodCap = 1u << 22;

std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b) {
  std::uint64_t g = std::gcd(a, b);
  std::uint64_t l = a / g;
  if (l > kPeriodCap / b) fail(ErrKind::BudgetExceeded, "eventually-periodic period overflow");
  return l * b;
}

// Lift to a common (start, period) frame.
void align(EPSet& a, EPSet& b) {
  std::uint64_t p = lcm_capped(a.period, b.period);
  std::uint64_t s = std::max(a.start, b.start);
  auto lift = [&](EPSet& x) {
    std::set<std::uint64_t> rs;
    for (std::uint64_t r = 0; r < p; ++r)
      if (x.residues.count((r + (s - x.start) % x.period) % x.period)) rs.insert(r);
    std::set<std::uint64_t> pre = x.prefix;
    for (std::uint64_t n = x.start; n < s; ++n)
      if (x.member(n)) pre.insert(n);
    x.prefix = std::move(pre);
    x.start = s;
    x.period = p;
    x.residues = std::move(rs);
  };
  lift(a);
  lift(b);
}

}  // namespace

EPSet EPSet::all() {
  EPSet s;
  s.residues = {0};
  return s;
}

EPSet EPSet::none() { return EPSet{}; }

EPSet EPSet::finite(std::set<std::uint64_t> pts) {
  EPSet s;
  s.prefix = std::move(pts);
  s.start = s.prefix.empty() ? 0 : *s.prefix.rbegin() + 1;
  return s;
}

EPSet EPSet::arithmetic(std::uint64_t a, std::uint64_t d) {
  if (d == 0) fail(ErrKind::BadSpec, "arithmetic index set needs step >= 1");
  EPSet s;
  s.start = a;
  s.period = d;
  s.residues = {0};
  return s;
}

bool EPSet::member(std::uint64_t n) const {
  if (n < start) return prefix.count(n) > 0;
  return residues.count((n - start) % period) > 0;
}

bool EPSet::is_empty() const { return prefix.empty() && residues.empty(); }

bool EPSet::is_infinite() const { return !residues.empty(); }

std::optional<std::uint64_t> EPSet::min() const {
  if (!prefix.empty()) return *prefix.begin();
  if (residues.empty()) return std::nullopt;
  return start + *residues.begin();
}

std::vector<std::uint64_t> EPSet::take(std::size_t count) const {
  std::vector<std::uint64_t> out;
  for (auto p : prefix) {
    if (out.size() >= count) return out;
    out.push_back(p);
  }
  if (residues.empty()) return out;
  for (std::uint64_t n = start; out.size() < count; ++n)
    if (residues.count((n - start) % period)) out.push_back(n);
  return out;
}

EPSet EPSet::tail_from(std::uint64_t bound) const {
  EPSet out = *this;
  if (bound <= start) {
    std::set<std::uint64_t> pre;
    for (auto p : prefix)
      if (p >= bound) pre.insert(p);
    out.prefix = std::move(pre);
    return out;
  }
  out.prefix.clear();
  out.start = bound;
  std::set<std::uint64_t> rs;
  for (std::uint64_t r = 0; r < period; ++r)
    if (residues.count((r + (bound - start) % period) % period)) rs.insert(r);
  out.residues = std::move(rs);
  return out;
}

EPSet EPSet::without(std::uint64_t n) const {
  EPSet out = *this;
  if (n < start) {
    out.prefix.erase(n);
    return out;
  }
  // Push the periodic start past n, materializing skipped members.
  for (std::uint64_t m = start; m <= n; ++m)
    if (member(m) && m != n) out.prefix.insert(m);
  std::uint64_t ns = n + 1;
  std::set<std::uint64_t> rs;
  for (std::uint64_t r = 0; r < period; ++r)
    if (residues.count((r + (ns - start) % period) % period)) rs.insert(r);
  out.start = ns;
  out.residues = std::move(rs);
  return out;
}

std::optional<std::uint64_t> EPSet::size_if_finite() const {
  if (is_infinite()) return std::nullopt;
  return prefix.size();
}

EPSet ep_union(const EPSet& a0, const EPSet& b0) {
  EPSet a = a0, b = b0;
  align(a, b);
  EPSet out = a;
  out.prefix.insert(b.prefix.begin(), b.prefix.end());
  out.residues.insert(b.residues.begin(), b.residues.end());
  return ep_normalize(out);
}

EPSet ep_intersect(const EPSet& a0, const EPSet& b0) {
  EPSet a = a0, b = b0;
  align(a, b);
  EPSet out;
  out.start = a.start;
  out.period = a.period;
  for (auto p : a.prefix)
    if (b.prefix.count(p)) out.prefix.insert(p);
  for (auto r : a.residues)
    if (b.residues.count(r)) out.residues.insert(r);
  return ep_normalize(out);
}

EPSet ep_diff(const EPSet& a0, const EPSet& b0) {
  EPSet a = a0, b = b0;
  align(a, b);
  EPSet out;
  out.start = a.start;
  out.period = a.period;
  for (auto p : a.prefix)
    if (!b.prefix.count(p)) out.prefix.insert(p);
  for (auto r : a.residues)
    if (!b.residues.count(r)) out.residues.insert(r);
  return ep_normalize(out);
}

EPSet ep_complement(const EPSet& a) {
  EPSet out;
  out.start = a.start;
  out.period = a.period;
  for (std::uint64_t n = 0; n < a.start; ++n)
    if (!a.prefix.count(n)) out.prefix.insert(n);
  for (std::uint64_t r = 0; r < a.period; ++r)
    if (!a.residues.count(r)) out.residues.insert(r);
  return ep_normalize(out);
}

bool ep_equal(const EPSet& a0, const EPSet& b0) {
  EPSet a = a0, b = b0;
  align(a, b);
  return a.prefix == b.prefix && a.residues == b.residues;
}

EPSet ep_shift_down(const EPSet& e, std::uint64_t t) {
  EPSet out;
  out.period = e.period;
  out.start = e.start > t ? e.start - t : 0;
  for (std::uint64_t n = 0; n < out.start; ++n)
    if (e.member(n + t)) out.prefix.insert(n);
  for (std::uint64_t r = 0; r < out.period; ++r)
    if (e.member(out.start + r + t)) out.residues.insert(r);
  return ep_normalize(out);
}

EPSet ep_shift_up(const EPSet& e, std::uint64_t t) {
  EPSet out;
  out.period = e.period;
  out.start = e.start + t;
  for (auto p : e.prefix) out.prefix.insert(p + t);
  out.residues = e.residues;
  return ep_normalize(out);
}

EPSet ep_affine_preimage(const EPSet& e, std::uint64_t a, std::uint64_t d) {
  if (d == 0) fail(ErrKind::BadSpec, "affine preimage needs d >= 1");
  EPSet out;
  out.period = e.period / std::gcd(d, e.period);
  if (out.period == 0) out.period = 1;
  std::uint64_t t0 = a >= e.start ? 0 : (e.start - a + d - 1) / d;
  out.start = t0;
  for (std::uint64_t t = 0; t < t0; ++t)
    if (e.member(a + d * t)) out.prefix.insert(t);
  for (std::uint64_t r = 0; r < out.period; ++r)
    if (e.member(a + d * (t0 + r))) out.residues.insert(r);
  return ep_normalize(out);
}

EPSet ep_affine_image(const EPSet& e, std::uint64_t a, std::uint64_t d) {
  if (d == 0) fail(ErrKind::BadSpec, "affine image needs d >= 1");
  EPSet out;
  out.period = lcm_capped(e.period * d, 1);
  out.start = a + d * e.start;
  for (auto p : e.prefix) out.prefix.insert(a + d * p);
  for (auto r : e.residues) out.residues.insert((d * r) % out.period);
  return ep_normalize(out);
}

EPSet ep_normalize(const EPSet& a) {
  EPSet out = a;
  // Smallest divisor of the period that still decides membership by r mod d.
  for (std::uint64_t d = 1; d < out.period; ++d) {
    if (out.period % d) continue;
    bool ok = true;
    for (std::uint64_t c = 0; ok && c < d; ++c) {
      bool want = out.residues.count(c) > 0;
      for (std::uint64_t q = c; q < out.period; q += d)
        if ((out.residues.count(q) > 0) != want) { ok = false; break; }
    }
    if (ok) {
      std::set<std::uint64_t> rs;
      for (auto r : out.residues) rs.insert(r % d);
      out.residues = std::move(rs);
      out.period = d;
      break;
    }
  }
  // Absorb prefix members that already follow the periodic pattern.
  while (out.start > 0) {
    std::uint64_t prev = out.start - 1;
    std::set<std::uint64_t> rotated;
    for (auto r : out.residues) rotated.insert((r + 1) % out.period);
    bool would_be_member = rotated.count(0) > 0;
    if ((out.prefix.count(prev) > 0) != would_be_member) break;
    out.start = prev;
    out.residues = std::move(rotated);
    out.prefix.erase(prev);
  }
  if (out.residues.empty()) {
    out.period = 1;
    out.start = out.prefix.empty() ? 0 : *out.prefix.rbegin() + 1;
  }
  return out;
}

std::string EPSet::str() const {
  std::ostringstream os;
  os << "{pre=";
  bool first = true;
  os << "[";
  for (auto p : prefix) {
    if (!first) os << ",";
    os << p;
    first = false;
  }
  os << "] from=" << start << " mod=" << period << " rs=[";
  first = true;
  for (auto r : residues) {
    if (!first) os << ",";
    os << r;
    first = false;
  }
  os << "]}";
  return os.str();
}

}  // namespace ordlab

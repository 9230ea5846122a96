#include "cuffdim/symbolic.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

namespace cuffdim {

bool is_reduced(std::span<const Symbol> symbols) {
  for (std::size_t i = 1; i < symbols.size(); ++i) {
    if (symbols[i] == bar(symbols[i - 1])) return false;
  }
  return true;
}

ReducedWord::ReducedWord(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  if (!is_reduced(symbols_)) throw Error("word is not reduced: " + str());
}

ReducedWord ReducedWord::parse(const std::string& text) {
  std::vector<Symbol> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(symbol_from_char(c));
  return ReducedWord(std::move(out));
}

ReducedWord ReducedWord::from_code(std::uint32_t code, int n) {
  ReducedWord w;
  w.symbols_.resize(n);
  for (int i = n - 1; i >= 0; --i) {
    w.symbols_[i] = static_cast<Symbol>(code & 3u);
    code >>= 2;
  }
  return w;
}

void ReducedWord::push_back(Symbol s) {
  if (!symbols_.empty() && s == bar(symbols_.back())) {
    throw Error("push_back would create a cancelling pair in " + str());
  }
  symbols_.push_back(s);
}

void ReducedWord::push_front(Symbol s) {
  if (!symbols_.empty() && s == bar(symbols_.front())) {
    throw Error("push_front would create a cancelling pair in " + str());
  }
  symbols_.insert(symbols_.begin(), s);
}

ReducedWord ReducedWord::prefix(std::size_t n) const {
  ReducedWord w;
  w.symbols_.assign(symbols_.begin(), symbols_.begin() + std::min(n, symbols_.size()));
  return w;
}

ReducedWord ReducedWord::shifted() const {
  ReducedWord w;
  if (!symbols_.empty()) w.symbols_.assign(symbols_.begin() + 1, symbols_.end());
  return w;
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord w;
  w.symbols_.reserve(symbols_.size());
  for (auto it = symbols_.rbegin(); it != symbols_.rend(); ++it) w.symbols_.push_back(bar(*it));
  return w;
}

ReducedWord ReducedWord::rotated(std::size_t k) const {
  ReducedWord w = *this;
  if (!symbols_.empty()) {
    std::rotate(w.symbols_.begin(), w.symbols_.begin() + (k % symbols_.size()), w.symbols_.end());
  }
  return w;
}

bool ReducedWord::cyclically_reduced() const {
  return symbols_.empty() || symbols_.size() == 1 || symbols_.front() != bar(symbols_.back());
}

std::uint32_t ReducedWord::code() const {
  if (symbols_.size() > 16) throw Error("word too long to pack: " + std::to_string(symbols_.size()));
  std::uint32_t c = 0;
  for (Symbol s : symbols_) c = (c << 2) | static_cast<std::uint32_t>(s);
  return c;
}

std::string ReducedWord::str() const {
  std::string out;
  out.reserve(symbols_.size());
  for (Symbol s : symbols_) out.push_back(to_char(s));
  return out;
}

std::size_t reduced_word_count(int n) {
  if (n <= 0) return n == 0 ? 1 : 0;
  std::size_t count = 4;
  for (int i = 1; i < n; ++i) count *= 3;
  return count;
}

std::size_t lexicographic_rank(const ReducedWord& w) {
  if (w.empty()) return 0;
  std::size_t rank = static_cast<std::size_t>(index_of(w[0]));
  for (std::size_t i = 1; i < w.size(); ++i) {
    const int idx = index_of(w[i]);
    const int skipped = index_of(bar(w[i - 1]));
    rank = rank * 3 + static_cast<std::size_t>(idx > skipped ? idx - 1 : idx);
  }
  return rank;
}

ReducedWord boundary_expansion(const PantsGeometry& pants, BoundaryPoint t, int max_n) {
  ReducedWord out;
  for (int i = 0; i < max_n; ++i) {
    const ExpansionStep step = expansion_map_step(pants, t);
    if (!step.symbol) break;
    // Rounding at an arc endpoint can land on the cancelled symbol; the orbit
    // has then left the Cantor set and the itinerary stops.
    if (!out.empty() && *step.symbol == bar(out.back())) break;
    out.push_back(*step.symbol);
    t = step.image;
  }
  return out;
}

MoebiusTransform word_to_element(const PantsGeometry& pants, std::span<const Symbol> w) {
  if (!is_reduced(w)) throw Error("word_to_element: word is not reduced");
  MoebiusTransform m;
  for (Symbol s : w) m = m * pants.generator(s);
  return m;
}

MoebiusTransform word_to_element(const PantsGeometry& pants, const ReducedWord& w) {
  return word_to_element(pants, std::span<const Symbol>(w.symbols()));
}

namespace {

// Image of a cylinder arc under the inverse branch phi_{bar(s)}; rejects
// images that rounding has collapsed or turned inside out.
Arc branch_image(const PantsGeometry& pants, Symbol s, const Arc& arc) {
  const MoebiusTransform& g = pants.generator(bar(s));
  const BoundaryPoint lo = BoundaryPoint::from_complex(g.apply(arc.lo().z()));
  const BoundaryPoint hi = BoundaryPoint::from_complex(g.apply(arc.hi().z()));
  const double len = ccw_distance(lo.theta(), hi.theta());
  if (!(len > 0.0) || !(len < arc.length())) throw Error("cylinder arc below double resolution");
  return Arc(lo, hi);
}

}  // namespace

Arc cylinder_arc(const PantsGeometry& pants, const ReducedWord& w) {
  if (w.empty()) throw Error("cylinder_arc: empty word");
  Arc arc = pants.arc(w.back());
  for (std::size_t i = w.size() - 1; i-- > 0;) arc = branch_image(pants, w[i], arc);
  return arc;
}

std::size_t CylinderCover::index_of(const ReducedWord& w) const {
  if (static_cast<int>(w.size()) != depth_) throw Error("CylinderCover::index_of: wrong word length");
  return lexicographic_rank(w);
}

CylinderCover cylinder_cover(const PantsGeometry& pants, int n) {
  if (n < 1 || n > kMaxCoverDepth) {
    throw Error("cylinder_cover: depth must be in [1, 14], got " + std::to_string(n));
  }
  CylinderCover cover;
  cover.depth_ = 1;
  for (Symbol s : kSymbols) {
    cover.codes_.push_back(static_cast<std::uint32_t>(s));
    cover.arcs_.push_back(pants.arc(s));
  }
  for (int k = 1; k < n; ++k) {
    CylinderCover next;
    next.depth_ = k + 1;
    next.codes_.reserve(cover.size() * 3);
    next.arcs_.reserve(cover.size() * 3);
    const int lead_shift = 2 * k;
    for (Symbol s : kSymbols) {
      const std::uint32_t lead = static_cast<std::uint32_t>(s) << lead_shift;
      for (std::size_t j = 0; j < cover.size(); ++j) {
        const auto first = static_cast<Symbol>(cover.codes_[j] >> (lead_shift - 2));
        if (first == bar(s)) continue;
        next.codes_.push_back(lead | cover.codes_[j]);
        next.arcs_.push_back(branch_image(pants, s, cover.arcs_[j]));
      }
    }
    cover = std::move(next);
  }
  return cover;
}

void write_cover_csv(std::ostream& out, const CylinderCover& cover) {
  out << "word,lo_angle,hi_angle\n";
  char buf[96];
  for (std::size_t i = 0; i < cover.size(); ++i) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", cover.arc(i).lo().theta(), cover.arc(i).hi().theta());
    out << cover.word(i).str() << buf;
  }
}

std::size_t SymbolSequence::known() const {
  return periodic() ? std::numeric_limits<std::size_t>::max() : prefix.size();
}

Symbol SymbolSequence::at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  if (!periodic()) throw Error("SymbolSequence: index beyond the known prefix");
  return period[(i - prefix.size()) % period.size()];
}

ReducedWord SymbolSequence::first(std::size_t n) const {
  if (!periodic()) return prefix.prefix(n);
  std::vector<Symbol> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
  return ReducedWord(std::move(out));
}

SymbolSequence SymbolSequence::shifted() const {
  if (!prefix.empty()) return {prefix.shifted(), period};
  return {prefix, period.rotated(1)};
}

SymbolSequence SymbolSequence::prepended(Symbol s) const {
  if (prefix.empty() && periodic() && period.back() == s) {
    return {prefix, period.rotated(period.size() - 1)};
  }
  if (known() > 0 && at(0) == bar(s)) throw Error("prepended symbol cancels");
  SymbolSequence out = *this;
  out.prefix.push_front(s);
  return out;
}

SymbolSequence periodic_sequence(const ReducedWord& period) {
  if (period.empty() || !period.cyclically_reduced()) {
    throw Error("periodic_sequence: period must be non-empty and cyclically reduced");
  }
  return {ReducedWord{}, period};
}

BoundaryPoint realize(const PantsGeometry& pants, const SymbolSequence& seq, int depth) {
  if (seq.periodic()) {
    // Expansion v^inf is fixed by phi_{v_{p-1}} ... phi_{v_0}, which expands
    // there; it is the attracting point of the inverse g_{bar v_0} ... g_{bar v_{p-1}}.
    std::vector<Symbol> inv;
    for (std::size_t i = 0; i < seq.period.size(); ++i) inv.push_back(bar(seq.period[i]));
    const IsometryInfo info = classify_isometry(word_to_element(pants, inv));
    if (!info.axis) throw Error("realize: period does not give a hyperbolic element");
    BoundaryPoint t = info.axis->forward();
    for (std::size_t i = seq.prefix.size(); i-- > 0;) {
      t = boundary_action(pants.generator(bar(seq.prefix[i])), t).point;
    }
    return t;
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(depth, 1)), seq.known());
  if (k == 0) throw Error("realize: empty sequence");
  return cylinder_arc(pants, seq.first(k)).midpoint();
}

void check_pair(const GeodesicPair& pair) {
  if (pair.xi.known() == 0 || pair.eta.known() == 0) throw Error("GeodesicPair: empty endpoint word");
  if (pair.xi.at(0) == pair.eta.at(0)) throw Error("GeodesicPair: xi_0 == eta_0");
}

GeodesicPair periodic_pair(const ReducedWord& w) {
  if (w.empty() || !w.cyclically_reduced()) {
    throw Error("periodic_pair: word must be non-empty and cyclically reduced");
  }
  const std::size_t p = w.size();
  std::vector<Symbol> eta;
  eta.push_back(bar(w[0]));
  for (std::size_t i = p - 1; i >= 1; --i) eta.push_back(bar(w[i]));
  GeodesicPair pair{periodic_sequence(w.rotated(1)), periodic_sequence(ReducedWord(std::move(eta)))};
  check_pair(pair);
  return pair;
}

Geodesic geodesic_from_pair(const PantsGeometry& pants, const GeodesicPair& pair, int depth) {
  check_pair(pair);
  return Geodesic(realize(pants, pair.xi, depth), realize(pants, pair.eta, depth));
}

std::vector<SideCrossing> octagon_crossings(const PantsGeometry& pants, const Geodesic& g) {
  const GeodesicFrame frame(g);
  const DiskPoint o = frame.origin();
  std::vector<SideCrossing> out;
  for (const OctagonSide& side : pants.octagon()) {
    if (side.geodesic.same_as(g)) continue;
    for (int sign : {1, -1}) {
      const BoundaryPoint toward = sign > 0 ? g.forward() : g.backward();
      const auto hit = ray_crossing(o, toward, side.geodesic);
      if (!hit) continue;
      if (side.contains(hit->point)) out.push_back({side.label, sign * hit->t, hit->point});
      if (hit->t == 0.0) break;
    }
  }
  std::sort(out.begin(), out.end(), [](const SideCrossing& x, const SideCrossing& y) { return x.t < y.t; });
  return out;
}

namespace {

struct Exit {
  SideCrossing crossing;
  bool tie = false;
};

std::optional<Exit> exit_crossing(const std::vector<SideCrossing>& crossings) {
  if (crossings.size() < 2) return std::nullopt;
  const double tie = tolerances().vertex_tie;
  const double t_max = crossings.back().t;
  if (t_max - crossings.front().t <= tie) return std::nullopt;
  Exit exit{crossings.back(), false};
  // At a vertex two sides meet; the glued side wins.
  for (auto it = crossings.rbegin() + 1; it != crossings.rend() && t_max - it->t <= tie; ++it) {
    if (it->side == exit.crossing.side) continue;
    exit.tie = true;
    if (side_symbol(it->side) && !side_symbol(exit.crossing.side)) exit.crossing = *it;
  }
  return exit;
}

}  // namespace

TraceResult cutting_sequence_trace(const PantsGeometry& pants, const Geodesic& g, int n) {
  if (n < 0 || n > kMaxTraceLength) throw Error("cutting_sequence_trace: length must be in [0, 200]");
  TraceResult result;
  Geodesic current = g;
  for (int step = 0; step < n; ++step) {
    const auto exit = exit_crossing(octagon_crossings(pants, current));
    if (!exit) {
      if (step == 0) throw Error("cutting_sequence_trace: geodesic misses the octagon");
      result.escaped = true;
      break;
    }
    if (exit->tie) ++result.vertex_ties;
    const auto symbol = side_symbol(exit->crossing.side);
    if (!symbol) {
      result.escaped = true;
      result.escape_side = exit->crossing.side;
      break;
    }
    result.word.push_back(*symbol);
    current = apply(pants.generator(*symbol), current);
  }
  return result;
}

TraceResult cutting_sequence_trace(const PantsGeometry& pants, const GeodesicPair& pair, int n,
                                   int depth) {
  if (n < 0 || n > kMaxTraceLength) throw Error("cutting_sequence_trace: length must be in [0, 200]");
  TraceResult result;
  GeodesicPair current = pair;
  for (int step = 0; step < n; ++step) {
    if (current.xi.known() == 0) break;
    const Geodesic g = geodesic_from_pair(pants, current, depth);
    const auto exit = exit_crossing(octagon_crossings(pants, g));
    if (!exit) {
      if (step == 0) throw Error("cutting_sequence_trace: geodesic misses the octagon");
      result.escaped = true;
      break;
    }
    if (exit->tie) ++result.vertex_ties;
    const auto symbol = side_symbol(exit->crossing.side);
    if (!symbol) {
      result.escaped = true;
      result.escape_side = exit->crossing.side;
      break;
    }
    result.word.push_back(*symbol);
    if (*symbol != current.xi.at(0)) {
      result.symbolic_mismatch = true;
      break;
    }
    current = {current.xi.shifted(), current.eta.prepended(bar(*symbol))};
  }
  return result;
}

double suspension_time(const PantsGeometry& pants, const Geodesic& g) {
  const auto crossings = octagon_crossings(pants, g);
  if (crossings.size() < 2 || !(crossings.back().t > crossings.front().t)) {
    throw Error("suspension_time: geodesic does not cross the octagon");
  }
  return crossings.back().t - crossings.front().t;
}

double suspension_time(const PantsGeometry& pants, const GeodesicPair& pair, int depth) {
  return suspension_time(pants, geodesic_from_pair(pants, pair, depth));
}

}  // namespace cuffdim

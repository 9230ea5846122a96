#pragma once

// Words over {alpha, alpha-bar, beta, beta-bar}, cylinder arcs of the limit
// set, and the correspondence between pairs of boundary words and geodesics
// crossing the octagon.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cuffdim/pants.hpp"

namespace cuffdim {

bool is_reduced(std::span<const Symbol> symbols);

/// Finite word with no adjacent pair tau, bar(tau).
class ReducedWord {
 public:
  ReducedWord() = default;
  /// Throws on a non-reduced sequence.
  explicit ReducedWord(std::vector<Symbol> symbols);
  /// Letters a, A, b, B.
  static ReducedWord parse(const std::string& text);
  /// Inverse of code(); n symbols, first symbol in the highest bits.
  static ReducedWord from_code(std::uint32_t code, int n);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol front() const { return symbols_.front(); }
  Symbol back() const { return symbols_.back(); }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  /// Throws if the result would not be reduced.
  void push_back(Symbol s);
  void push_front(Symbol s);
  ReducedWord prefix(std::size_t n) const;
  /// Drops the first symbol.
  ReducedWord shifted() const;
  /// bar(w_{n-1}) ... bar(w_0), the word of the inverse element.
  ReducedWord inverse() const;
  /// Cyclic rotation by k to the left.
  ReducedWord rotated(std::size_t k) const;
  /// True if the cyclic word is reduced (last and first letters allowed).
  bool cyclically_reduced() const;

  /// Two bits per symbol; requires size() <= 16.
  std::uint32_t code() const;
  std::string str() const;

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend auto operator<=>(const ReducedWord&, const ReducedWord&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Number of reduced words of length n >= 1: 4 * 3^(n-1).
std::size_t reduced_word_count(int n);

/// Position of w in the lexicographic list of reduced words of its length.
std::size_t lexicographic_rank(const ReducedWord& w);

/// Boundary map itinerary of t, at most max_n symbols.
ReducedWord boundary_expansion(const PantsGeometry& pants, BoundaryPoint t, int max_n);

/// g_{w_0} g_{w_1} ... applied left to right (the first letter acts last).
/// Throws on a non-reduced sequence.
MoebiusTransform word_to_element(const PantsGeometry& pants, std::span<const Symbol> w);
MoebiusTransform word_to_element(const PantsGeometry& pants, const ReducedWord& w);

/// Arc of points whose expansion starts with w (w non-empty).
Arc cylinder_arc(const PantsGeometry& pants, const ReducedWord& w);

inline constexpr int kMaxCoverDepth = 14;

/// All reduced words of one length with their cylinder arcs, lexicographic.
class CylinderCover {
 public:
  int depth() const { return depth_; }
  std::size_t size() const { return codes_.size(); }
  ReducedWord word(std::size_t i) const { return ReducedWord::from_code(codes_[i], depth_); }
  std::uint32_t code(std::size_t i) const { return codes_[i]; }
  const Arc& arc(std::size_t i) const { return arcs_[i]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  /// Index of w (length must equal depth).
  std::size_t index_of(const ReducedWord& w) const;

 private:
  friend CylinderCover cylinder_cover(const PantsGeometry& pants, int n);

  int depth_ = 0;
  std::vector<std::uint32_t> codes_;
  std::vector<Arc> arcs_;
};

/// 1 <= n <= 14.
CylinderCover cylinder_cover(const PantsGeometry& pants, int n);

/// CSV with header word,lo_angle,hi_angle; angles with 17 significant digits.
void write_cover_csv(std::ostream& out, const CylinderCover& cover);

/// An infinite word given as prefix followed by period repeated forever. With
/// an empty period only the prefix is known.
struct SymbolSequence {
  ReducedWord prefix;
  ReducedWord period;

  bool periodic() const { return !period.empty(); }
  /// Number of known symbols; unbounded for periodic sequences.
  std::size_t known() const;
  Symbol at(std::size_t i) const;
  ReducedWord first(std::size_t n) const;
  SymbolSequence shifted() const;
  SymbolSequence prepended(Symbol s) const;
};

SymbolSequence periodic_sequence(const ReducedWord& period);

/// Boundary point of the sequence: exact for eventually periodic sequences,
/// otherwise the midpoint of the cylinder of the first min(depth, known)
/// symbols.
BoundaryPoint realize(const PantsGeometry& pants, const SymbolSequence& seq, int depth);

/// (xi, eta): forward and backward endpoint words of a geodesic, xi_0 != eta_0.
struct GeodesicPair {
  SymbolSequence xi;
  SymbolSequence eta;
};

/// Throws if the first symbols agree or a word is empty.
void check_pair(const GeodesicPair& pair);

/// The pair of the bi-infinite periodic cutting sequence with period w read
/// from index 0: xi = (w_1 ... w_{p-1} w_0)^inf, eta = (bar w_0 bar w_{p-1} ... bar w_1)^inf.
GeodesicPair periodic_pair(const ReducedWord& w);

/// Geodesic from the eta endpoint to the xi endpoint.
Geodesic geodesic_from_pair(const PantsGeometry& pants, const GeodesicPair& pair, int depth);

struct SideCrossing {
  SideLabel side;
  double t;  // arclength parameter along the geodesic frame
  DiskPoint point;
};

/// Crossings of the geodesic with the octagon sides (segments, not extensions),
/// sorted by parameter. Sides lying on the geodesic are skipped.
std::vector<SideCrossing> octagon_crossings(const PantsGeometry& pants, const Geodesic& g);

inline constexpr int kMaxTraceLength = 200;

struct TraceResult {
  ReducedWord word;
  bool escaped = false;                  // left R through a cuff or c side
  std::optional<SideLabel> escape_side;
  int vertex_ties = 0;                   // exits resolved at an octagon vertex
  bool symbolic_mismatch = false;        // pair trace only: exit side != xi_0
};

/// Geometric cutting sequence: exit side of R, record its label, pull the
/// geodesic back by that generator, repeat. Throws if g misses R.
TraceResult cutting_sequence_trace(const PantsGeometry& pants, const Geodesic& g, int n);

/// Same tracing, but each pull-back is applied to the endpoint words
/// ((xi, eta) -> (shift xi, bar(tau) eta)) and the geodesic is re-realized at
/// the given cylinder depth, so that long traces do not lose precision.
TraceResult cutting_sequence_trace(const PantsGeometry& pants, const GeodesicPair& pair, int n,
                                   int depth);

/// Hyperbolic length of the part of the realized geodesic inside R.
double suspension_time(const PantsGeometry& pants, const GeodesicPair& pair, int depth);
double suspension_time(const PantsGeometry& pants, const Geodesic& g);

}  // namespace cuffdim

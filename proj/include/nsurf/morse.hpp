#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <boost/rational.hpp>

#include "nsurf/error.hpp"
#include "nsurf/triangulation.hpp"

namespace nsurf {

using Rational = boost::rational<long long>;

// Morse words for knots and one-vertex graphs, read bottom to top. Strands
// at a level are numbered 0, 1, ... from the left.

enum class EventKind { Birth, Death, Crossing, Vertex };

struct MorseEvent {
  EventKind kind;
  std::size_t position;
  int sign = 0;           // crossings only
  std::size_t below = 0;  // vertices only
  std::size_t above = 0;

  static MorseEvent birth(std::size_t i) { return {EventKind::Birth, i}; }
  static MorseEvent death(std::size_t i) { return {EventKind::Death, i}; }
  static MorseEvent crossing(std::size_t i, int s) { return {EventKind::Crossing, i, s < 0 ? -1 : 1}; }
  static MorseEvent vertex(std::size_t i, std::size_t below, std::size_t above) {
    return {EventKind::Vertex, i, 0, below, above};
  }

  /// Strands consumed from the level below and produced on the level above.
  std::size_t strands_before() const {
    switch (kind) {
      case EventKind::Birth: return 0;
      case EventKind::Death: return 2;
      case EventKind::Crossing: return 2;
      case EventKind::Vertex: return below;
    }
    return 0;
  }
  std::size_t strands_after() const {
    switch (kind) {
      case EventKind::Birth: return 2;
      case EventKind::Death: return 0;
      case EventKind::Crossing: return 2;
      case EventKind::Vertex: return above;
    }
    return 0;
  }
  bool critical() const { return kind != EventKind::Crossing; }

  MorseEvent at(std::size_t p) const {
    MorseEvent e = *this;
    e.position = p;
    return e;
  }

  friend auto operator<=>(const MorseEvent&, const MorseEvent&) = default;
};

class MorseWord {
 public:
  MorseWord() = default;
  explicit MorseWord(std::vector<MorseEvent> events) : events_(std::move(events)) { check(); }

  const std::vector<MorseEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  const MorseEvent& operator[](std::size_t i) const { return events_[i]; }

  /// Strand count after each event.
  std::vector<std::size_t> levels() const {
    std::vector<std::size_t> out;
    std::size_t n = 0;
    for (const auto& e : events_) {
      n = n - e.strands_before() + e.strands_after();
      out.push_back(n);
    }
    return out;
  }

  /// Strand counts on the gaps between consecutive critical events.
  std::vector<std::size_t> gap_counts() const {
    std::vector<std::size_t> out;
    std::size_t n = 0;
    std::size_t remaining = static_cast<std::size_t>(
        std::count_if(events_.begin(), events_.end(), [](const MorseEvent& e) { return e.critical(); }));
    for (const auto& e : events_) {
      n = n - e.strands_before() + e.strands_after();
      if (e.critical() && --remaining > 0) out.push_back(n);
    }
    return out;
  }

  std::optional<std::size_t> vertex_index() const {
    for (std::size_t i = 0; i < events_.size(); ++i)
      if (events_[i].kind == EventKind::Vertex) return i;
    return std::nullopt;
  }

  friend auto operator<=>(const MorseWord&, const MorseWord&) = default;

 private:
  void check() const {
    std::size_t n = 0;
    bool vertex_seen = false;
    for (std::size_t i = 0; i < events_.size(); ++i) {
      const auto& e = events_[i];
      const std::string where = "event " + std::to_string(i) + ": ";
      if (e.kind == EventKind::Vertex) {
        if (vertex_seen) throw MorseError("invalid_word", where + "more than one vertex");
        if (e.below + e.above < 3) throw MorseError("invalid_word", where + "vertex valence below 3");
        vertex_seen = true;
      }
      if (e.kind == EventKind::Crossing && e.sign != 1 && e.sign != -1)
        throw MorseError("invalid_word", where + "crossing sign must be +1 or -1");
      if (e.position + e.strands_before() > n || (e.strands_before() == 0 && e.position > n))
        throw MorseError("invalid_word", where + "position " + std::to_string(e.position) + " out of range for " +
                                             std::to_string(n) + " strands");
      n = n - e.strands_before() + e.strands_after();
    }
    if (n != 0) throw MorseError("invalid_word", "word ends with " + std::to_string(n) + " strands");
  }

  std::vector<MorseEvent> events_;
};

inline MorseWord parse_morse(std::string_view text) {
  std::vector<MorseEvent> events;
  for (auto [line_no, line] : detail::content_lines(text)) {
    const auto tok = detail::tokenize(line);
    auto number = [&](std::size_t i) {
      if (i >= tok.size()) throw ParseError(line_no, line.size() + 1, "missing position");
      auto v = detail::parse_index(tok[i].text);
      if (!v) throw ParseError(line_no, tok[i].column, "expected a nonnegative integer, got '" + std::string(tok[i].text) + "'");
      return *v;
    };
    const std::string_view op = tok[0].text;
    std::size_t expect = 2;
    if (op == "min") {
      events.push_back(MorseEvent::birth(number(1)));
    } else if (op == "max") {
      events.push_back(MorseEvent::death(number(1)));
    } else if (op == "x+" || op == "x-") {
      events.push_back(MorseEvent::crossing(number(1), op == "x+" ? 1 : -1));
    } else if (op == "vertex") {
      events.push_back(MorseEvent::vertex(number(1), number(2), number(3)));
      expect = 4;
    } else {
      throw ParseError(line_no, tok[0].column, "unknown event '" + std::string(op) + "'");
    }
    if (tok.size() > expect) throw ParseError(line_no, tok[expect].column, "unexpected token");
  }
  return MorseWord(std::move(events));
}

inline std::string serialize(const MorseWord& w) {
  std::string out;
  for (const auto& e : w.events()) {
    switch (e.kind) {
      case EventKind::Birth: out += "min " + std::to_string(e.position); break;
      case EventKind::Death: out += "max " + std::to_string(e.position); break;
      case EventKind::Crossing: out += (e.sign > 0 ? "x+ " : "x- ") + std::to_string(e.position); break;
      case EventKind::Vertex:
        out += "vertex " + std::to_string(e.position) + " " + std::to_string(e.below) + " " + std::to_string(e.above);
        break;
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Leaf complexity

enum class Ambient { Closed, Bounded, RelativeToK };

struct LeafComponent {
  bool closed;
  bool disk_or_sphere;
  long chi;
};

struct LeafDescriptor {
  std::vector<LeafComponent> components;
  long k_points = 0;  // |F cap K|
};

inline void check_descriptor(const LeafDescriptor& d) {
  if (d.k_points < 0) throw MorseError("inconsistent_descriptor", "negative intersection count");
  for (const auto& c : d.components) {
    const long top = c.closed ? 2 : 1;
    if (c.chi > top) throw MorseError("inconsistent_descriptor", "euler characteristic too large");
    if (c.disk_or_sphere != (c.chi == top))
      throw MorseError("inconsistent_descriptor", c.closed ? "sphere flag disagrees with chi" : "disk flag disagrees with chi");
  }
}

inline Rational leaf_complexity(const LeafDescriptor& d, Ambient ambient) {
  check_descriptor(d);
  Rational total = 0;
  for (const auto& c : d.components) {
    if (ambient == Ambient::Closed) {
      if (!c.closed) throw MorseError("inconsistent_descriptor", "bounded leaf in a closed ambient manifold");
      if (!c.disk_or_sphere) total += Rational(1 - c.chi);
      continue;
    }
    if (c.disk_or_sphere) continue;
    total += c.closed ? Rational(1 - c.chi) : Rational(1, 2) - Rational(c.chi);
  }
  if (ambient == Ambient::RelativeToK) total += Rational(d.k_points);
  return total;
}

// ---------------------------------------------------------------------------
// Width and Lmax

inline long width(const MorseWord& w) {
  long total = 0;
  for (auto c : w.gap_counts()) total += static_cast<long>(c);
  return total;
}

/// Thick-level complexities sorted non-increasing.
class LmaxProfile {
 public:
  LmaxProfile() = default;
  explicit LmaxProfile(std::vector<Rational> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end(), [](const Rational& a, const Rational& b) { return a > b; });
  }
  const std::vector<Rational>& values() const { return values_; }

  /// Lexicographic; a proper prefix is smaller.
  friend std::strong_ordering operator<=>(const LmaxProfile& a, const LmaxProfile& b) {
    const std::size_t n = std::min(a.values_.size(), b.values_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.values_[i] < b.values_[i]) return std::strong_ordering::less;
      if (b.values_[i] < a.values_[i]) return std::strong_ordering::greater;
    }
    return a.values_.size() <=> b.values_.size();
  }
  friend bool operator==(const LmaxProfile& a, const LmaxProfile& b) { return a.values_ == b.values_; }

 private:
  std::vector<Rational> values_;
};

namespace detail {

/// Index ranges [lo, hi) of plateaus strictly higher than both neighbours.
template <class T>
std::vector<std::pair<std::size_t, std::size_t>> plateau_maxima(const std::vector<T>& xs) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j + 1 < xs.size() && xs[j + 1] == xs[i]) ++j;
    const bool left = i == 0 || xs[i - 1] < xs[i];
    const bool right = j + 1 == xs.size() || xs[j + 1] < xs[i];
    if (left && right) out.emplace_back(i, j + 1);
    i = j + 1;
  }
  return out;
}

}  // namespace detail

enum class LmaxMode { Ambient, RelativeToK };

/// Level leaves are spheres meeting K in the strand count. Thick levels are
/// the local maxima of the strand counts; Ambient values each one at 0.
inline LmaxProfile lmax_profile(const MorseWord& w, LmaxMode mode) {
  const auto counts = w.gap_counts();
  std::vector<Rational> values;
  for (auto [lo, hi] : detail::plateau_maxima(counts)) {
    LeafDescriptor d{{{true, true, 2}}, static_cast<long>(counts[lo])};
    values.push_back(leaf_complexity(d, mode == LmaxMode::RelativeToK ? Ambient::RelativeToK : Ambient::Closed));
  }
  return LmaxProfile(std::move(values));
}

/// Profile of an explicit leaf sequence, one descriptor per gap.
inline LmaxProfile lmax_profile(const std::vector<LeafDescriptor>& leaves, Ambient ambient) {
  std::vector<Rational> c;
  for (const auto& d : leaves) c.push_back(leaf_complexity(d, ambient));
  std::vector<Rational> values;
  for (auto [lo, hi] : detail::plateau_maxima(c)) values.push_back(c[lo]);
  return LmaxProfile(std::move(values));
}

struct BridgeReport {
  bool is_bridge;
  long bridge_number;
};

inline BridgeReport bridge_report(const MorseWord& w) {
  if (w.vertex_index()) throw MorseError("vertex_present", "bridge report needs a knot word without vertices");
  long deaths = 0;
  bool bridge = true;
  for (const auto& e : w.events()) {
    if (e.kind == EventKind::Death) ++deaths;
    if (e.kind == EventKind::Birth && deaths > 0) bridge = false;
  }
  return {bridge, deaths};
}

/// True when the vertex is a local extremum of the height on the graph.
inline bool vertex_in_good_position(const MorseWord& w) {
  const auto i = w.vertex_index();
  if (!i) throw MorseError("no_vertex", "word has no vertex event");
  return w[*i].below == 0 || w[*i].above == 0;
}

// ---------------------------------------------------------------------------
// Moves

enum class CommuteSide { Left, Right };

namespace detail {

/// Which sides are available for swapping events k and k+1.
inline std::vector<CommuteSide> commute_sides(const MorseWord& w, std::size_t k) {
  const auto& e1 = w[k];
  const auto& e2 = w[k + 1];
  std::vector<CommuteSide> out;
  if (e2.position + e2.strands_before() <= e1.position) out.push_back(CommuteSide::Left);
  if (e2.position >= e1.position + e1.strands_after()) out.push_back(CommuteSide::Right);
  return out;
}

}  // namespace detail

/// Swaps events k and k+1 when they act on disjoint strands. The upper event
/// lies entirely left (Left) or right (Right) of the lower event's output;
/// `side` only matters when both hold, which happens when a Birth or
/// zero-above vertex sits directly on top of a Death or zero-below vertex.
inline MorseWord commute(const MorseWord& w, std::size_t k, CommuteSide side = CommuteSide::Left) {
  if (k + 1 >= w.size()) throw MorseError("invalid_move", "no events at " + std::to_string(k) + ", " + std::to_string(k + 1));
  const auto sides = detail::commute_sides(w, k);
  if (sides.empty())
    throw MorseError("dependent_events", "events " + std::to_string(k) + " and " + std::to_string(k + 1) + " share strands");
  if (std::find(sides.begin(), sides.end(), side) == sides.end()) side = sides.front();
  const auto& e1 = w[k];
  const auto& e2 = w[k + 1];
  auto events = w.events();
  if (side == CommuteSide::Left) {
    events[k] = e2;
    events[k + 1] = e1.at(e1.position - e2.strands_before() + e2.strands_after());
  } else {
    events[k] = e2.at(e2.position - e1.strands_after() + e1.strands_before());
    events[k + 1] = e1;
  }
  return MorseWord(std::move(events));
}

/// True if event k is a Birth whose new strand is immediately capped off by
/// a Death with an older neighbour, forming a removable zigzag.
inline bool is_zigzag(const MorseWord& w, std::size_t k) {
  if (k + 1 >= w.size()) return false;
  const auto& b = w[k];
  const auto& d = w[k + 1];
  return b.kind == EventKind::Birth && d.kind == EventKind::Death &&
         (d.position == b.position + 1 || d.position + 1 == b.position);
}

inline MorseWord cancel_zigzag(const MorseWord& w, std::size_t k) {
  if (!is_zigzag(w, k)) throw MorseError("invalid_move", "events " + std::to_string(k) + ", " + std::to_string(k + 1) + " are not a zigzag");
  auto events = w.events();
  events.erase(events.begin() + static_cast<std::ptrdiff_t>(k), events.begin() + static_cast<std::ptrdiff_t>(k + 2));
  return MorseWord(std::move(events));
}

enum class Objective { Width, Lmax };

struct MinimizeOptions {
  std::size_t cap = 14;
  bool allow_cancellation = true;
};

struct MinimizeResult {
  MorseWord word;
  long width;
  LmaxProfile lmax;  // RelativeToK
  std::size_t explored;
};

/// Breadth-first search over words reachable by commutations (and zigzag
/// cancellations unless disabled). Returns the least word, in word order,
/// among those minimizing the objective.
inline MinimizeResult minimize(const MorseWord& w, Objective objective, const MinimizeOptions& opts = {}) {
  if (w.size() > opts.cap)
    throw GuardError("word has " + std::to_string(w.size()) + " events, search cap is " + std::to_string(opts.cap));
  std::set<MorseWord> seen{w};
  std::deque<MorseWord> frontier{w};
  MinimizeResult best{w, width(w), lmax_profile(w, LmaxMode::RelativeToK), 0};
  auto better = [&](const MorseWord& c, long cw, const LmaxProfile& cl) {
    if (objective == Objective::Width) {
      if (cw != best.width) return cw < best.width;
    } else if (cl != best.lmax) {
      return cl < best.lmax;
    }
    return c < best.word;
  };
  auto visit = [&](MorseWord next) {
    if (seen.insert(next).second) frontier.push_back(std::move(next));
  };
  while (!frontier.empty()) {
    MorseWord cur = std::move(frontier.front());
    frontier.pop_front();
    ++best.explored;
    const long cw = width(cur);
    auto cl = lmax_profile(cur, LmaxMode::RelativeToK);
    if (better(cur, cw, cl)) {
      best.word = cur;
      best.width = cw;
      best.lmax = std::move(cl);
    }
    for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
      for (auto side : detail::commute_sides(cur, k)) visit(commute(cur, k, side));
      if (opts.allow_cancellation && is_zigzag(cur, k)) visit(cancel_zigzag(cur, k));
    }
  }
  return best;
}

}  // namespace nsurf

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nsurf {

/// A permutation of the four vertices {0,1,2,3} of a tetrahedron, stored as
/// the image of (0,1,2,3).
class Perm4 {
 public:
  constexpr Perm4() : img_{0, 1, 2, 3} {}
  constexpr Perm4(int a, int b, int c, int d)
      : img_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
             static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {}

  static constexpr Perm4 identity() { return {}; }

  constexpr int operator[](int i) const { return img_[static_cast<std::size_t>(i)]; }

  constexpr Perm4 inverse() const {
    Perm4 out;
    for (int i = 0; i < 4; ++i) out.img_[img_[i]] = static_cast<std::uint8_t>(i);
    return out;
  }

  /// (*this * other)[i] == (*this)[other[i]]
  constexpr Perm4 operator*(const Perm4& other) const {
    Perm4 out;
    for (int i = 0; i < 4; ++i) out.img_[i] = img_[other.img_[i]];
    return out;
  }

  /// +1 for even permutations, -1 for odd.
  constexpr int sign() const {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (img_[i] > img_[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
  }

  constexpr bool is_bijection() const {
    unsigned seen = 0;
    for (auto v : img_) {
      if (v > 3) return false;
      seen |= 1u << v;
    }
    return seen == 0xF;
  }

  std::string str() const {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) s[static_cast<std::size_t>(i)] = static_cast<char>('0' + img_[i]);
    return s;
  }

  /// Parses the 4-digit image string, e.g. "1023".
  static std::optional<Perm4> parse(std::string_view s) {
    if (s.size() != 4) return std::nullopt;
    Perm4 p;
    for (int i = 0; i < 4; ++i) {
      char c = s[static_cast<std::size_t>(i)];
      if (c < '0' || c > '3') return std::nullopt;
      p.img_[i] = static_cast<std::uint8_t>(c - '0');
    }
    if (!p.is_bijection()) return std::nullopt;
    return p;
  }

  friend constexpr bool operator==(const Perm4&, const Perm4&) = default;
  friend constexpr auto operator<=>(const Perm4&, const Perm4&) = default;

 private:
  std::array<std::uint8_t, 4> img_;
};

// Tetrahedron edges are indexed 0..5 as 01, 02, 03, 12, 13, 23.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int edge_index(int a, int b) {
  if (a > b) {
    int t = a;
    a = b;
    b = t;
  }
  // 01->0 02->1 03->2 12->3 13->4 23->5
  return a == 0 ? b - 1 : (a == 1 ? b + 1 : 5);
}

/// The three vertices of face f (the face opposite vertex f), ascending.
constexpr std::array<int, 3> face_vertices(int f) {
  std::array<int, 3> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != f) out[static_cast<std::size_t>(k++)] = v;
  return out;
}

}  // namespace nsurf

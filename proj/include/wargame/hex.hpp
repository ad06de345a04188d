#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace wargame {

// Axial hex coordinate. The implied cube coordinate is s = -q - r.
struct HexCoord {
  int q = 0;
  int r = 0;

  constexpr int s() const { return -q - r; }
  auto operator<=>(const HexCoord&) const = default;
};

constexpr int hex_distance(HexCoord a, HexCoord b) {
  const int dq = a.q - b.q;
  const int dr = a.r - b.r;
  const int ds = a.s() - b.s();
  return ((dq < 0 ? -dq : dq) + (dr < 0 ? -dr : dr) + (ds < 0 ? -ds : ds)) / 2;
}

inline constexpr std::array<HexCoord, 6> kHexDirections = {
    HexCoord{1, 0}, HexCoord{1, -1}, HexCoord{0, -1},
    HexCoord{-1, 0}, HexCoord{-1, 1}, HexCoord{0, 1}};

constexpr std::array<HexCoord, 6> hex_neighbors(HexCoord h) {
  std::array<HexCoord, 6> out{};
  for (std::size_t i = 0; i < 6; ++i) out[i] = {h.q + kHexDirections[i].q, h.r + kHexDirections[i].r};
  return out;
}

// Hexes on the straight line from a to b, both endpoints included.
std::vector<HexCoord> hex_line(HexCoord a, HexCoord b);

enum class Terrain : std::uint8_t { Clear, Woods, Urban, Hill, Water };

inline constexpr int kImpassable = 0;

constexpr int move_cost(Terrain t) {
  switch (t) {
    case Terrain::Clear: return 1;
    case Terrain::Woods: return 2;
    case Terrain::Urban: return 2;
    case Terrain::Hill: return 2;
    case Terrain::Water: return kImpassable;
  }
  return kImpassable;
}

constexpr int combat_modifier(Terrain t) {
  switch (t) {
    case Terrain::Woods: return -1;
    case Terrain::Hill: return -1;
    case Terrain::Urban: return -2;
    default: return 0;
  }
}

constexpr double concealment(Terrain t) {
  switch (t) {
    case Terrain::Hill: return 0.8;
    case Terrain::Woods: return 0.5;
    case Terrain::Urban: return 0.4;
    default: return 1.0;
  }
}

constexpr bool is_passable(Terrain t) { return move_cost(t) != kImpassable; }

std::string_view terrain_name(Terrain t);
std::optional<Terrain> parse_terrain(std::string_view name);

// Rectangular region of axial space: 0 <= q < width, 0 <= r < height.
class GameMap {
 public:
  GameMap() = default;
  GameMap(int width, int height, Terrain fill = Terrain::Clear);

  int width() const { return width_; }
  int height() const { return height_; }
  int cell_count() const { return width_ * height_; }

  bool in_bounds(HexCoord h) const { return h.q >= 0 && h.q < width_ && h.r >= 0 && h.r < height_; }
  int index(HexCoord h) const { return h.r * width_ + h.q; }
  HexCoord coord(int index) const { return {index % width_, index / width_}; }

  // Throws std::out_of_range for coordinates outside the map.
  Terrain terrain(HexCoord h) const;
  void set_terrain(HexCoord h, Terrain t);

  bool passable(HexCoord h) const { return in_bounds(h) && is_passable(terrain_[index(h)]); }

  // Largest hex distance between two in-bounds hexes.
  int diameter() const { return width_ + height_ - 2; }

  bool operator==(const GameMap&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Terrain> terrain_;
};

// A* over terrain move costs with the hex metric as heuristic. Returns the hexes
// entered, excluding `from` and including `to`; empty when from == to.
// Throws PathError when an endpoint is impassable or no path exists.
std::vector<HexCoord> find_path(const GameMap& map, HexCoord from, HexCoord to);
std::optional<std::vector<HexCoord>> try_find_path(const GameMap& map, HexCoord from, HexCoord to);

int path_cost(const GameMap& map, const std::vector<HexCoord>& path);

}  // namespace wargame

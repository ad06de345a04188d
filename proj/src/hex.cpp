#include "wargame/hex.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "wargame/errors.hpp"

namespace wargame {

namespace {

HexCoord cube_round(double fq, double fr) {
  const double fs = -fq - fr;
  double q = std::round(fq);
  double r = std::round(fr);
  const double s = std::round(fs);
  const double dq = std::abs(q - fq);
  const double dr = std::abs(r - fr);
  const double ds = std::abs(s - fs);
  if (dq > dr && dq > ds) {
    q = -r - s;
  } else if (dr > ds) {
    r = -q - s;
  }
  return {static_cast<int>(q), static_cast<int>(r)};
}

}  // namespace

std::vector<HexCoord> hex_line(HexCoord a, HexCoord b) {
  const int n = hex_distance(a, b);
  std::vector<HexCoord> out;
  out.reserve(n + 1);
  if (n == 0) {
    out.push_back(a);
    return out;
  }
  // Nudge off exact hex edges so ties resolve consistently.
  const double aq = a.q + 1e-6, ar = a.r + 1e-6;
  const double bq = b.q + 1e-6, br = b.r + 1e-6;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    out.push_back(cube_round(aq + (bq - aq) * t, ar + (br - ar) * t));
  }
  return out;
}

std::string_view terrain_name(Terrain t) {
  switch (t) {
    case Terrain::Clear: return "clear";
    case Terrain::Woods: return "woods";
    case Terrain::Urban: return "urban";
    case Terrain::Hill: return "hill";
    case Terrain::Water: return "water";
  }
  return "clear";
}

std::optional<Terrain> parse_terrain(std::string_view name) {
  for (Terrain t : {Terrain::Clear, Terrain::Woods, Terrain::Urban, Terrain::Hill, Terrain::Water}) {
    if (terrain_name(t) == name) return t;
  }
  return std::nullopt;
}

GameMap::GameMap(int width, int height, Terrain fill)
    : width_(width), height_(height), terrain_(static_cast<std::size_t>(width) * height, fill) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("map dimensions must be positive");
}

Terrain GameMap::terrain(HexCoord h) const {
  if (!in_bounds(h)) {
    throw std::out_of_range("hex (" + std::to_string(h.q) + "," + std::to_string(h.r) + ") outside map");
  }
  return terrain_[index(h)];
}

void GameMap::set_terrain(HexCoord h, Terrain t) {
  if (!in_bounds(h)) {
    throw std::out_of_range("hex (" + std::to_string(h.q) + "," + std::to_string(h.r) + ") outside map");
  }
  terrain_[index(h)] = t;
}

std::optional<std::vector<HexCoord>> try_find_path(const GameMap& map, HexCoord from, HexCoord to) {
  if (!map.passable(from) || !map.passable(to)) return std::nullopt;
  if (from == to) return std::vector<HexCoord>{};

  constexpr int kUnseen = std::numeric_limits<int>::max();
  const int cells = map.cell_count();
  std::vector<int> g(cells, kUnseen);
  std::vector<int> parent(cells, -1);
  std::vector<char> closed(cells, 0);

  // (f, q, r): equal f expands the lexicographically smallest hex first.
  using Entry = std::tuple<int, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[map.index(from)] = 0;
  open.emplace(hex_distance(from, to), from.q, from.r);

  while (!open.empty()) {
    const auto [f, q, r] = open.top();
    open.pop();
    const HexCoord cur{q, r};
    const int ci = map.index(cur);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (cur == to) break;
    for (const HexCoord next : hex_neighbors(cur)) {
      if (!map.passable(next)) continue;
      const int ni = map.index(next);
      if (closed[ni]) continue;
      const int cand = g[ci] + move_cost(map.terrain(next));
      if (cand < g[ni]) {
        g[ni] = cand;
        parent[ni] = ci;
        open.emplace(cand + hex_distance(next, to), next.q, next.r);
      }
    }
  }

  const int ti = map.index(to);
  if (!closed[ti]) return std::nullopt;
  std::vector<HexCoord> path;
  for (int at = ti; at != map.index(from); at = parent[at]) path.push_back(map.coord(at));
  return std::vector<HexCoord>(path.rbegin(), path.rend());
}

std::vector<HexCoord> find_path(const GameMap& map, HexCoord from, HexCoord to) {
  auto path = try_find_path(map, from, to);
  if (!path) {
    throw PathError("no path from (" + std::to_string(from.q) + "," + std::to_string(from.r) + ") to (" +
                    std::to_string(to.q) + "," + std::to_string(to.r) + ")");
  }
  return std::move(*path);
}

int path_cost(const GameMap& map, const std::vector<HexCoord>& path) {
  int cost = 0;
  for (const HexCoord h : path) cost += move_cost(map.terrain(h));
  return cost;
}

}  // namespace wargame

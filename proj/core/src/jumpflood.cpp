#include "sdfield/jumpflood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdfield/parallel.hpp"

namespace sdfield {

namespace {

struct SeedCoords {
    int32_t x, y, z;
};

inline int64_t dist2(int px, int py, int pz, const SeedCoords& s) {
    int64_t dx = px - s.x, dy = py - s.y, dz = pz - s.z;
    return dx * dx + dy * dy + dz * dz;
}

inline bool lex_less(const SeedCoords& a, const SeedCoords& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

} // namespace

NearestSeedGrid jfa_flood(const SeedGrid& seeds) {
    const GridSpec& spec = seeds.spec;
    NearestSeedGrid result(spec);

    bool any_seed = false;
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (seeds[i]) {
            result.nearest[i] = int32_t(i);
            any_seed = true;
        }
    }
    if (!any_seed) return result;

    // Seed coordinates resolved once; candidates during flooding carry the
    // seed's linear index.
    std::vector<SeedCoords> coords(spec.voxel_count());
    parallel_for(spec.voxel_count(), [&](size_t i) {
        auto c = spec.coords(i);
        coords[i] = {c[0], c[1], c[2]};
    });

    int max_dim = std::max({spec.resolution[0], spec.resolution[1], spec.resolution[2]});
    int step = 1;
    while (step * 2 < max_dim) step *= 2;   // 2^ceil(log2(max_dim)) / 2

    std::vector<int32_t> cur = result.nearest;
    std::vector<int32_t> next(cur.size());

    for (int k = step; k >= 1; k /= 2) {
        parallel_for(spec.voxel_count(), [&](size_t vi) {
            const SeedCoords p = coords[vi];
            int32_t best = cur[vi];
            int64_t best_d2 = best >= 0 ? dist2(p.x, p.y, p.z, coords[best]) : 0;

            for (int dz = -k; dz <= k; dz += k) {
                for (int dy = -k; dy <= k; dy += k) {
                    for (int dx = -k; dx <= k; dx += k) {
                        if (dx == 0 && dy == 0 && dz == 0) continue;
                        int nx = p.x + dx, ny = p.y + dy, nz = p.z + dz;
                        if (!spec.in_bounds(nx, ny, nz)) continue;
                        int32_t cand = cur[spec.index(nx, ny, nz)];
                        if (cand < 0 || cand == best) continue;
                        int64_t d2 = dist2(p.x, p.y, p.z, coords[cand]);
                        if (best < 0 || d2 < best_d2 ||
                            (d2 == best_d2 && lex_less(coords[cand], coords[best]))) {
                            best = cand;
                            best_d2 = d2;
                        }
                    }
                }
            }
            next[vi] = best;
        });
        std::swap(cur, next);
    }

    result.nearest = std::move(cur);
    return result;
}

NearestSeedGrid exact_nearest(const SeedGrid& seeds) {
    const GridSpec& spec = seeds.spec;
    NearestSeedGrid result(spec);

    // Seeds sorted by (x, y, z): scanning in this order with a strictly
    // smaller comparison makes the first minimum the lexicographic winner,
    // the same tie rule jfa_flood applies.
    std::vector<SeedCoords> sorted;
    std::vector<int32_t> sorted_index;
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (!seeds[i]) continue;
        auto c = spec.coords(i);
        sorted.push_back({c[0], c[1], c[2]});
        sorted_index.push_back(int32_t(i));
    }
    if (sorted.empty()) return result;

    std::vector<size_t> order(sorted.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return lex_less(sorted[a], sorted[b]); });

    size_t n = sorted.size();
    std::vector<int32_t> xs(n), ys(n), zs(n), idx(n);
    for (size_t i = 0; i < n; ++i) {
        xs[i] = sorted[order[i]].x;
        ys[i] = sorted[order[i]].y;
        zs[i] = sorted[order[i]].z;
        idx[i] = sorted_index[order[i]];
    }

    parallel_for(spec.voxel_count(), [&](size_t vi) {
        auto c = spec.coords(vi);
        int32_t px = c[0], py = c[1], pz = c[2];

        // Pass 1: plain minimum, written to vectorize.
        int32_t best_d2 = INT32_MAX;
        for (size_t i = 0; i < n; ++i) {
            int32_t dx = px - xs[i], dy = py - ys[i], dz = pz - zs[i];
            int32_t d2 = dx * dx + dy * dy + dz * dz;
            best_d2 = std::min(best_d2, d2);
        }
        // Pass 2: first seed attaining it, in (x, y, z) order.
        for (size_t i = 0; i < n; ++i) {
            int32_t dx = px - xs[i], dy = py - ys[i], dz = pz - zs[i];
            if (dx * dx + dy * dy + dz * dz == best_d2) {
                result.nearest[vi] = idx[i];
                break;
            }
        }
    });
    return result;
}

ScalarGrid coarse_sdf(const NearestSeedGrid& nearest, const JfaParams& params) {
    const GridSpec& spec = nearest.spec;
    float limit = spec.voxel_size * std::sqrt(3.f);
    if (!(params.sign_bias >= 0.f) || params.sign_bias >= limit) {
        throw std::invalid_argument("sign_bias must be in [0, voxel_size * sqrt(3))");
    }

    ScalarGrid out(spec, kInf);
    parallel_for(spec.voxel_count(), [&](size_t vi) {
        int32_t seed = nearest.nearest[vi];
        if (seed < 0) return;
        auto p = spec.coords(vi);
        auto s = spec.coords(size_t(seed));
        int64_t dx = p[0] - s[0], dy = p[1] - s[1], dz = p[2] - s[2];
        double d2 = double(dx * dx + dy * dy + dz * dz);
        out[vi] = float(double(spec.voxel_size) * std::sqrt(d2)) - params.sign_bias;
    });
    return out;
}

} // namespace sdfield

#include "dmapper/cover.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dmapper/errors.hpp"

namespace dmapper {

namespace {

std::string interval_str(const Interval& itv) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << itv.lo << ", " << itv.hi << ")";
    return os.str();
}

}  // namespace

ChainCover build_chain_cover(double a, double b, int n_chunks, double overlap_width) {
    if (!(a < b)) throw InvalidRange("filter range must satisfy a < b");
    if (n_chunks < 1) throw DomainError("number of chunks must be at least 1");

    const double len = b - a;
    const double chunk_len = len / n_chunks;

    // Interior cut positions are computed once, so the two chunks on either
    // side of a cut derive their endpoints from the same double and the
    // overlap region has bit-identical bounds in both.
    std::vector<double> cuts(static_cast<std::size_t>(n_chunks) + 1);
    for (int k = 0; k <= n_chunks; ++k) cuts[static_cast<std::size_t>(k)] = a + chunk_len * k;

    if (n_chunks > 1) {
        if (!(overlap_width > 0.0)) throw DomainError("overlap width must be positive");
        double min_gap = cuts[1] - cuts[0];
        for (int k = 1; k < n_chunks; ++k)
            min_gap = std::min(min_gap, cuts[static_cast<std::size_t>(k) + 1] - cuts[static_cast<std::size_t>(k)]);
        if (!(overlap_width < min_gap))
            throw OverlapTooWide("overlap width " + std::to_string(overlap_width) +
                                 " must be strictly less than the chunk length " +
                                 std::to_string(chunk_len));
    }

    // The outer endpoints are pushed out by half a percent of the range so
    // that the extreme filter values fall strictly inside the open cover.
    const double margin = 0.005 * len;
    const double half = overlap_width / 2.0;

    ChainCover chain;
    chain.a = a;
    chain.b = b;
    chain.chunks.reserve(static_cast<std::size_t>(n_chunks));
    for (int k = 0; k < n_chunks; ++k) {
        const double lo = (k == 0) ? a - margin : cuts[static_cast<std::size_t>(k)] - half;
        const double hi =
            (k == n_chunks - 1) ? b + margin : cuts[static_cast<std::size_t>(k) + 1] + half;
        chain.chunks.push_back({lo, hi});
    }
    return chain;
}

double default_overlap_width(double a, double b, int n_chunks, double gain) {
    if (!(a < b)) throw InvalidRange("filter range must satisfy a < b");
    if (n_chunks < 1) throw DomainError("number of chunks must be at least 1");
    if (!(gain > 0.0 && gain < 1.0)) throw DomainError("gain must lie strictly between 0 and 1");
    return gain * (b - a) / n_chunks;
}

PreprocessedCover build_sub_covers(const ChainCover& chain, int resolution, double gain) {
    if (chain.chunks.empty()) throw DomainError("chain cover has no chunks");
    if (resolution < 1) throw DomainError("resolution must be at least 1");
    if (!(gain > 0.0 && gain < 1.0)) throw DomainError("gain must lie strictly between 0 and 1");

    const auto n = chain.chunks.size();
    const auto m = static_cast<std::size_t>(resolution);

    // Shared intervals and the midpoints that bound the interior spans are
    // computed once per boundary; both neighbouring sub-covers then reuse the
    // identical doubles.  That bitwise sharing is what lets two chunks
    // cluster the same shared pullback and agree exactly.
    std::vector<Interval> shared(n > 0 ? n - 1 : 0);
    std::vector<double> mid(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Interval s{chain.chunks[i + 1].lo, chain.chunks[i].hi};
        if (!(s.lo < s.hi))
            throw DomainError("adjacent chunks " + std::to_string(i) + " and " +
                              std::to_string(i + 1) + " do not overlap");
        shared[i] = s;
        mid[i] = 0.5 * (s.lo + s.hi);
    }

    PreprocessedCover pc;
    pc.chain = chain;
    pc.sub_covers.resize(n);
    pc.sub_cover_ids.resize(n);
    pc.shared_ids.resize(shared.size());

    int next_id = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto& intervals = pc.sub_covers[i];
        auto& ids = pc.sub_cover_ids[i];

        if (i > 0) {
            intervals.push_back(shared[i - 1]);
            ids.push_back(pc.shared_ids[i - 1]);
        }

        // Interior intervals tile the span between the boundary-overlap
        // midpoints (chunk ends for the outermost chunks): uniform length,
        // consecutive ones overlapping by `gain` of their length.
        const double span_lo = (i == 0) ? chain.chunks[i].lo : mid[i - 1];
        const double span_hi = (i + 1 == n) ? chain.chunks[i].hi : mid[i];
        const double len = (span_hi - span_lo) / (static_cast<double>(m - 1) * (1.0 - gain) + 1.0);
        const double stride = len * (1.0 - gain);
        for (std::size_t j = 0; j < m; ++j) {
            double lo = span_lo + stride * static_cast<double>(j);
            double hi = lo + len;
            // Clip to the span so accumulated rounding can never push an
            // interior interval past the midpoint into the neighbour chunk's
            // territory; the first/last interior then starts/ends exactly on
            // the span bound.
            if (j == 0 || lo < span_lo) lo = span_lo;
            if (j + 1 == m || hi > span_hi) hi = span_hi;
            intervals.push_back({lo, hi});
            ids.push_back(next_id++);
        }

        if (i + 1 < n) {
            pc.shared_ids[i] = next_id;
            intervals.push_back(shared[i]);
            ids.push_back(next_id++);
        }
    }
    pc.id_count = next_id;
    return pc;
}

std::vector<CoverElement> flatten_cover(const PreprocessedCover& pc) {
    std::vector<CoverElement> flat;
    flat.reserve(static_cast<std::size_t>(pc.id_count));
    for (std::size_t i = 0; i < pc.num_chunks(); ++i) {
        for (std::size_t j = 0; j < pc.sub_covers[i].size(); ++j) {
            const int id = pc.sub_cover_ids[i][j];
            // The interval shared with the previous chunk was already listed
            // by that chunk.
            if (i > 0 && id == pc.shared_ids[i - 1]) continue;
            flat.push_back({id, pc.sub_covers[i][j]});
        }
    }
    std::sort(flat.begin(), flat.end(),
              [](const CoverElement& x, const CoverElement& y) { return x.id < y.id; });
    return flat;
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::BadInterval: return "bad-interval";
        case ViolationKind::ChainGap: return "chain-gap";
        case ViolationKind::ChainNonAdjacentOverlap: return "chain-non-adjacent-overlap";
        case ViolationKind::ChainRangeGap: return "chain-range-gap";
        case ViolationKind::SubCoverGap: return "sub-cover-gap";
        case ViolationKind::SharedMismatch: return "shared-mismatch";
        case ViolationKind::CrossChunkOverlap: return "cross-chunk-overlap";
        case ViolationKind::NonAdjacentOverlap: return "non-adjacent-overlap";
        case ViolationKind::IdMappingError: return "id-mapping-error";
    }
    return "unknown";
}

namespace {

// Whether the open intervals, taken together, cover the target.  Exact sweep
// over endpoints, no sampling: sorted by lo, the union stays connected only
// while each next interval starts strictly before the reach so far.  For an
// open target the endpoints themselves need no witness; for a closed target
// they need strict containment.
bool covers_target(std::vector<Interval> elements, double target_lo, double target_hi,
                   bool closed_target) {
    std::sort(elements.begin(), elements.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    double reach = target_lo;
    bool started = false;
    for (const auto& itv : elements) {
        if (!started) {
            const bool starts_early = closed_target ? itv.lo < target_lo : itv.lo <= target_lo;
            if (!starts_early) return false;  // left end uncovered
            started = true;
        } else if (!(itv.lo < reach)) {
            return false;  // gap at `reach`
        }
        reach = std::max(reach, itv.hi);
        if (closed_target ? reach > target_hi : reach >= target_hi) return true;
    }
    return false;
}

}  // namespace

std::vector<Violation> validate_preprocessed_cover(const PreprocessedCover& pc) {
    std::vector<Violation> out;
    const auto push = [&out](ViolationKind kind, int ca, int cb, std::string detail) {
        out.push_back({kind, ca, cb, std::move(detail)});
    };

    const auto& chunks = pc.chain.chunks;
    const auto n = chunks.size();

    // Structural bookkeeping first; if the shapes are inconsistent, bail out
    // after reporting rather than indexing out of bounds.
    bool shape_ok = true;
    if (pc.sub_covers.size() != n || pc.sub_cover_ids.size() != n ||
        pc.shared_ids.size() + (n > 0 ? 1 : 0) != std::max<std::size_t>(n, 1)) {
        push(ViolationKind::IdMappingError, -1, -1,
             "sub-cover / shared-id bookkeeping does not match the chunk count");
        shape_ok = false;
    }
    if (shape_ok) {
        for (std::size_t i = 0; i < n; ++i) {
            if (pc.sub_covers[i].size() != pc.sub_cover_ids[i].size()) {
                push(ViolationKind::IdMappingError, static_cast<int>(i), -1,
                     "sub-cover " + std::to_string(i) + " has mismatched interval and id lists");
                shape_ok = false;
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!(chunks[i].lo < chunks[i].hi))
            push(ViolationKind::BadInterval, static_cast<int>(i), -1,
                 "chunk " + std::to_string(i) + " is empty: " + interval_str(chunks[i]));
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!chunks[i].intersects(chunks[i + 1]))
            push(ViolationKind::ChainGap, static_cast<int>(i), static_cast<int>(i + 1),
                 "adjacent chunks do not overlap");
        for (std::size_t j = i + 2; j < n; ++j) {
            if (chunks[i].intersects(chunks[j]))
                push(ViolationKind::ChainNonAdjacentOverlap, static_cast<int>(i),
                     static_cast<int>(j), "chunks two or more apart overlap");
        }
    }

    if (n > 0 && !covers_target(chunks, pc.chain.a, pc.chain.b, /*closed_target=*/true))
        push(ViolationKind::ChainRangeGap, -1, -1, "chunks do not cover the filter range");

    if (!shape_ok) return out;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < pc.sub_covers[i].size(); ++j) {
            const auto& itv = pc.sub_covers[i][j];
            if (!(itv.lo < itv.hi))
                push(ViolationKind::BadInterval, static_cast<int>(i), -1,
                     "sub-cover element " + interval_str(itv) + " is empty");
        }
        if (!(chunks[i].lo < chunks[i].hi)) continue;
        if (!covers_target(pc.sub_covers[i], chunks[i].lo, chunks[i].hi,
                           /*closed_target=*/false))
            push(ViolationKind::SubCoverGap, static_cast<int>(i), -1,
                 "sub-cover " + std::to_string(i) + " does not cover its chunk");
    }

    // Shared intervals: exactly one per boundary, present verbatim in both
    // neighbouring sub-covers.
    for (std::size_t b = 0; b + 1 < n; ++b) {
        const int sid = pc.shared_ids[b];
        const Interval* left = nullptr;
        const Interval* right = nullptr;
        int left_count = 0;
        int right_count = 0;
        for (std::size_t j = 0; j < pc.sub_cover_ids[b].size(); ++j)
            if (pc.sub_cover_ids[b][j] == sid) {
                left = &pc.sub_covers[b][j];
                ++left_count;
            }
        for (std::size_t j = 0; j < pc.sub_cover_ids[b + 1].size(); ++j)
            if (pc.sub_cover_ids[b + 1][j] == sid) {
                right = &pc.sub_covers[b + 1][j];
                ++right_count;
            }
        if (left_count != 1 || right_count != 1) {
            push(ViolationKind::SharedMismatch, static_cast<int>(b), static_cast<int>(b + 1),
                 "shared interval id " + std::to_string(sid) + " appears " +
                     std::to_string(left_count) + "/" + std::to_string(right_count) +
                     " times in the adjacent sub-covers");
            continue;
        }
        if (!(*left == *right))
            push(ViolationKind::SharedMismatch, static_cast<int>(b), static_cast<int>(b + 1),
                 "shared interval id " + std::to_string(sid) + " differs between sides: " +
                     interval_str(*left) + " vs " + interval_str(*right));
    }

    // Ids must be one-to-one with intervals: every id in [0, id_count), each
    // non-shared id used once, each shared id used exactly twice (in the two
    // adjacent sub-covers, holding equal intervals — checked above).
    {
        std::vector<int> uses(static_cast<std::size_t>(std::max(pc.id_count, 0)), 0);
        bool ids_ok = true;
        for (std::size_t i = 0; i < n && ids_ok; ++i) {
            for (int id : pc.sub_cover_ids[i]) {
                if (id < 0 || id >= pc.id_count) {
                    push(ViolationKind::IdMappingError, static_cast<int>(i), -1,
                         "id " + std::to_string(id) + " outside [0, " +
                             std::to_string(pc.id_count) + ")");
                    ids_ok = false;
                    break;
                }
                ++uses[static_cast<std::size_t>(id)];
            }
        }
        if (ids_ok) {
            std::vector<bool> is_shared(static_cast<std::size_t>(std::max(pc.id_count, 0)), false);
            for (int sid : pc.shared_ids)
                if (sid >= 0 && sid < pc.id_count) is_shared[static_cast<std::size_t>(sid)] = true;
            for (int id = 0; id < pc.id_count; ++id) {
                const int expected = is_shared[static_cast<std::size_t>(id)] ? 2 : 1;
                if (uses[static_cast<std::size_t>(id)] != expected)
                    push(ViolationKind::IdMappingError, -1, -1,
                         "id " + std::to_string(id) + " used " +
                             std::to_string(uses[static_cast<std::size_t>(id)]) +
                             " times, expected " + std::to_string(expected));
            }
        }
    }

    // Adjacent chunks may only meet through their shared interval; chunks
    // further apart may not meet at all.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1);
            for (std::size_t p = 0; p < pc.sub_covers[i].size(); ++p) {
                for (std::size_t q = 0; q < pc.sub_covers[j].size(); ++q) {
                    if (adjacent) {
                        const int sid = pc.shared_ids[i];
                        if (pc.sub_cover_ids[i][p] == sid || pc.sub_cover_ids[j][q] == sid)
                            continue;
                        if (pc.sub_covers[i][p].intersects(pc.sub_covers[j][q]))
                            push(ViolationKind::CrossChunkOverlap, static_cast<int>(i),
                                 static_cast<int>(j),
                                 "non-shared elements " + interval_str(pc.sub_covers[i][p]) +
                                     " and " + interval_str(pc.sub_covers[j][q]) + " overlap");
                    } else if (pc.sub_covers[i][p].intersects(pc.sub_covers[j][q])) {
                        push(ViolationKind::NonAdjacentOverlap, static_cast<int>(i),
                             static_cast<int>(j),
                             "elements of chunks " + std::to_string(i) + " and " +
                                 std::to_string(j) + " overlap");
                    }
                }
            }
        }
    }

    return out;
}

void require_valid_cover(const PreprocessedCover& pc) {
    const auto violations = validate_preprocessed_cover(pc);
    if (!violations.empty())
        throw DomainError("invalid preprocessed cover: " + to_string(violations.front().kind) +
                          ": " + violations.front().detail);
}

}  // namespace dmapper

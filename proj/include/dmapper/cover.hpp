#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dmapper {

// Open interval (lo, hi).  All cover elements are open: a point sitting
// exactly on an endpoint belongs to the overlapping neighbour, never to the
// boundary itself, which is what makes chunk-local pullbacks reproducible.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo < x && x < hi; }
    bool intersects(const Interval& o) const { return lo < o.hi && o.lo < hi; }
    Interval intersection(const Interval& o) const {
        return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
    }
    bool operator==(const Interval& o) const = default;
};

// Ordered chunks where exactly the consecutive ones overlap.
struct ChainCover {
    double a = 0.0;
    double b = 0.0;
    std::vector<Interval> chunks;

    std::size_t size() const { return chunks.size(); }
};

// A cover element with its global id.  Ids are assigned in ascending order
// of interval position, so sorting by id sorts by position.
struct CoverElement {
    int id = 0;
    Interval interval;
};

// Chain cover refined into one sub-cover per chunk.  The interval shared by
// chunks i and i+1 appears verbatim (same floating-point endpoints) in both
// sub_covers[i] and sub_covers[i+1] and carries a single global id,
// recorded in shared_ids[i]; every other element belongs to one sub-cover.
struct PreprocessedCover {
    ChainCover chain;
    std::vector<std::vector<Interval>> sub_covers;
    std::vector<std::vector<int>> sub_cover_ids;  // parallel to sub_covers
    std::vector<int> shared_ids;                  // one per internal boundary
    int id_count = 0;

    std::size_t num_chunks() const { return sub_covers.size(); }
};

// Splits [a, b] into n_chunks overlapping open intervals: interior
// boundaries sit at a + k*(b-a)/n_chunks widened by overlap_width/2 on each
// side, and the outer endpoints are pushed out by 0.5% of the range so the
// extremes are strictly inside the first/last chunk.
//
// Throws InvalidRange if a >= b, DomainError if n_chunks < 1 or
// overlap_width <= 0 (when n_chunks > 1), OverlapTooWide if overlap_width
// >= (b-a)/n_chunks, which would make non-adjacent chunks touch.
ChainCover build_chain_cover(double a, double b, int n_chunks, double overlap_width);

// Overlap width used when the caller does not pin one: gain * chunk length.
double default_overlap_width(double a, double b, int n_chunks, double gain);

// Refines each chunk into `resolution` interior intervals of uniform length
// with fractional overlap `gain`, then prepends/appends the shared boundary
// intervals.  Interior intervals are clipped against the open span between
// the midpoints of the chunk's boundary overlaps, so elements of adjacent
// sub-covers other than the shared interval never intersect.
//
// Throws DomainError if resolution < 1 or gain outside (0, 1).
PreprocessedCover build_sub_covers(const ChainCover& chain, int resolution, double gain);

// All elements of all sub-covers, shared intervals listed once, sorted by id.
std::vector<CoverElement> flatten_cover(const PreprocessedCover& pc);

enum class ViolationKind {
    BadInterval,              // some interval has lo >= hi
    ChainGap,                 // adjacent chunks do not overlap
    ChainNonAdjacentOverlap,  // chunks i, j with |i-j| >= 2 overlap
    ChainRangeGap,            // union of chunks misses part of [a, b]
    SubCoverGap,              // some chunk not covered by its sub-cover
    SharedMismatch,           // boundary interval missing or endpoint-skewed
    CrossChunkOverlap,        // non-shared elements of adjacent chunks meet
    NonAdjacentOverlap,       // elements of chunks >= 2 apart meet
    IdMappingError,           // id <-> interval bookkeeping is inconsistent
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    int chunk_a = -1;  // chunks involved; -1 where not applicable
    int chunk_b = -1;
    std::string detail;
};

// Checks every structural invariant a preprocessed cover must satisfy and
// returns all violations found (empty means valid).  Every cover produced
// by build_sub_covers passes; the checks exist to validate hand-built or
// deserialized covers and to state the merge-correctness preconditions.
std::vector<Violation> validate_preprocessed_cover(const PreprocessedCover& pc);

// Throws DomainError carrying the first violation if pc is invalid.
void require_valid_cover(const PreprocessedCover& pc);

}  // namespace dmapper

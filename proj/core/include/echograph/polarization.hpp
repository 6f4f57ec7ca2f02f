#pragma once

#include "echograph/community.hpp"
#include "echograph/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace echograph {

/// One user's interaction split across the two page communities.
/// rho = (y - x)/(y + x) where x counts interactions with community-0
/// pages and y with community-1 pages; -1 means exclusive engagement with
/// the first side, +1 with the second.
struct PolarizationProfile {
    std::string user_id;
    std::int64_t first_count = 0;    // x
    std::int64_t second_count = 0;   // y
    double rho = 0.0;
    InteractionKind kind = InteractionKind::like;
};

/// Computes one profile per user with at least one interaction of the
/// given kind on posts of partitioned pages. The partition must have
/// exactly two communities; interactions on pages outside the partition
/// are ignored. Profiles come back sorted by user id.
std::vector<PolarizationProfile> polarization_profiles(const InteractionDataset& d,
                                                       const Partition& pages,
                                                       InteractionKind kind);

struct PolarizedUsers {
    std::vector<std::string> first_members;    // rho <= -tau
    std::vector<std::string> second_members;   // rho >= tau
    std::size_t unaligned = 0;
    double tau = 1.0;
};

/// Splits profiles by threshold: toward the first community iff
/// rho <= -tau, toward the second iff rho >= tau. tau must lie in (0,1].
PolarizedUsers classify_polarized(const std::vector<PolarizationProfile>& profiles, double tau = 1.0);

/// Equal-width histogram over a fixed interval, normalized so that
/// sum(density * width) = 1.
struct Histogram {
    double lo = -1.0;
    double hi = 1.0;
    std::vector<std::uint64_t> counts;
    std::vector<double> density;

    std::size_t bins() const { return counts.size(); }
    double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
    double edge(std::size_t i) const { return lo + width() * static_cast<double>(i); }
    double center(std::size_t i) const { return edge(i) + width() / 2.0; }
};

inline constexpr int kDefaultPolarizationBins = 21;   // odd, so 0 sits on a bin center

/// Histogram density of values over [-1, 1]. Requires bins >= 2, a
/// nonempty input, and every value inside the interval.
Histogram pdf(const std::vector<double>& values, int bins = kDefaultPolarizationBins);

/// Histogram density over an arbitrary interval [lo, hi].
Histogram pdf_over(const std::vector<double>& values, int bins, double lo, double hi);

struct CcdfPoint {
    double value = 0.0;
    double probability = 0.0;   // P(X >= value)
};

/// Empirical complementary CDF evaluated at each distinct observed value,
/// ascending in value, so the first point has probability 1. Values must
/// be nonnegative and the input nonempty.
std::vector<CcdfPoint> ccdf(const std::vector<double>& values);

struct LifetimeRecord {
    std::string user_id;
    std::int64_t first_ts = 0;
    std::int64_t last_ts = 0;
    double lifetime_days = 0.0;   // (last_ts - first_ts) / 86400
    std::int64_t comment_count = 0;
};

struct LifetimeResult {
    std::vector<LifetimeRecord> records;   // sorted by user id
    std::size_t skipped_users = 0;         // listed users with no comments
};

/// Time between each listed user's first and last comment, in days.
/// Users without comments are skipped and counted.
LifetimeResult lifetimes(const InteractionDataset& d, const std::vector<std::string>& users);

} // namespace echograph

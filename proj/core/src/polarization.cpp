#include "echograph/polarization.hpp"

#include "echograph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace echograph {

std::vector<PolarizationProfile> polarization_profiles(const InteractionDataset& d,
                                                       const Partition& pages,
                                                       InteractionKind kind) {
    if (pages.community_count() != 2)
        throw ContractError("polarization needs a two-community page partition; got " +
                            std::to_string(pages.community_count()) +
                            " (merge or select two communities first)");

    std::unordered_map<std::string, const Post*> post_by_id;
    post_by_id.reserve(d.posts.size());
    for (const Post& post : d.posts) post_by_id.emplace(post.id, &post);

    // user -> (x, y)
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> tally;
    for (const Interaction& it : d.interactions) {
        if (it.kind != kind) continue;
        auto post_it = post_by_id.find(it.post_id);
        if (post_it == post_by_id.end()) continue;
        auto side = pages.find(post_it->second->page_id);
        if (!side) continue;   // page outside the partition
        auto& counts = tally[it.user_id];
        if (*side == 0)
            ++counts.first;
        else
            ++counts.second;
    }

    std::vector<PolarizationProfile> out;
    out.reserve(tally.size());
    for (const auto& [user, counts] : tally) {
        PolarizationProfile p;
        p.user_id = user;
        p.first_count = counts.first;
        p.second_count = counts.second;
        p.rho = static_cast<double>(counts.second - counts.first) /
                static_cast<double>(counts.second + counts.first);
        p.kind = kind;
        out.push_back(std::move(p));
    }
    return out;
}

PolarizedUsers classify_polarized(const std::vector<PolarizationProfile>& profiles, double tau) {
    if (!(tau > 0.0) || tau > 1.0)
        throw ParameterError("polarization threshold must lie in (0, 1]");
    PolarizedUsers out;
    out.tau = tau;
    for (const PolarizationProfile& p : profiles) {
        if (p.rho <= -tau)
            out.first_members.push_back(p.user_id);
        else if (p.rho >= tau)
            out.second_members.push_back(p.user_id);
        else
            ++out.unaligned;
    }
    return out;
}

Histogram pdf_over(const std::vector<double>& values, int bins, double lo, double hi) {
    if (bins < 2) throw ParameterError("histogram needs at least 2 bins");
    if (!(lo < hi)) throw ParameterError("histogram interval is empty");
    if (values.empty()) throw ParameterError("cannot build a histogram from no values");

    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        if (v < lo || v > hi)
            throw ParameterError("histogram value outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
        auto bin = static_cast<std::size_t>(
            std::min(static_cast<double>(bins - 1), std::floor((v - lo) / width)));
        ++h.counts[bin];
    }
    h.density.resize(h.counts.size());
    double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        h.density[i] = static_cast<double>(h.counts[i]) / (n * width);
    return h;
}

Histogram pdf(const std::vector<double>& values, int bins) {
    return pdf_over(values, bins, -1.0, 1.0);
}

std::vector<CcdfPoint> ccdf(const std::vector<double>& values) {
    if (values.empty()) throw ParameterError("cannot build a CCDF from no values");
    std::vector<double> sorted = values;
    for (double v : sorted)
        if (v < 0.0 || !std::isfinite(v))
            throw ParameterError("CCDF values must be finite and nonnegative");
    std::sort(sorted.begin(), sorted.end());

    std::vector<CcdfPoint> out;
    double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] == sorted[i - 1]) continue;
        out.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
    }
    return out;
}

LifetimeResult lifetimes(const InteractionDataset& d, const std::vector<std::string>& users) {
    struct Window {
        std::int64_t first = 0;
        std::int64_t last = 0;
        std::int64_t count = 0;
    };
    std::unordered_map<std::string, Window> windows;
    for (const Interaction& it : d.interactions) {
        if (it.kind != InteractionKind::comment) continue;
        auto [w, inserted] = windows.try_emplace(it.user_id, Window{it.timestamp, it.timestamp, 0});
        if (!inserted) {
            w->second.first = std::min(w->second.first, it.timestamp);
            w->second.last = std::max(w->second.last, it.timestamp);
        }
        ++w->second.count;
    }

    std::set<std::string> unique(users.begin(), users.end());
    LifetimeResult out;
    for (const std::string& user : unique) {
        auto found = windows.find(user);
        if (found == windows.end()) {
            ++out.skipped_users;
            continue;
        }
        LifetimeRecord rec;
        rec.user_id = user;
        rec.first_ts = found->second.first;
        rec.last_ts = found->second.last;
        rec.lifetime_days =
            static_cast<double>(found->second.last - found->second.first) / 86400.0;
        rec.comment_count = found->second.count;
        out.records.push_back(std::move(rec));
    }
    return out;
}

} // namespace echograph

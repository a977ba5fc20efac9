#include "carlton/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "carlton/errors.hpp"

namespace carlton {

void ScoreWeights::validate() const {
    if (cq < 0 || anccs < 0 || cts < 0 || ses < 0) throw DomainError("score weights must be >= 0");
    if (std::abs(cq + anccs + cts + ses - 1.0) > 1e-9) throw DomainError("score weights must sum to 1");
}

CqStats cq_stats(std::span<const std::vector<double>> final_qvs, std::span<const int> final_channels) {
    if (final_qvs.empty() || final_qvs.size() != final_channels.size())
        throw DomainError("cq_stats: need one QV and one channel per network");
    std::vector<double> cq;
    cq.reserve(final_qvs.size());
    for (std::size_t n = 0; n < final_qvs.size(); ++n)
        cq.push_back(final_qvs[n].at(static_cast<std::size_t>(final_channels[n])));

    CqStats s;
    double sum = 0.0;
    for (double v : cq) sum += v;
    s.mean = sum / static_cast<double>(cq.size());
    std::sort(cq.begin(), cq.end());
    const std::size_t mid = cq.size() / 2;
    s.median = cq.size() % 2 == 1 ? cq[mid] : 0.5 * (cq[mid - 1] + cq[mid]);
    s.min = cq.front();
    return s;
}

double anccs(std::span<const int> change_counts, int decision_points) {
    if (change_counts.empty() || decision_points < 1)
        throw DomainError("anccs: need at least one network and T >= 1");
    double sum = 0.0;
    for (int c : change_counts) {
        if (c < 0 || c > decision_points) throw DomainError("anccs: change count outside [0, T]");
        sum += c;
    }
    return 1.0 - (sum / static_cast<double>(change_counts.size())) / decision_points;
}

double cts(int last_change_step, int decision_points, int n_networks) {
    const int horizon = decision_points * n_networks;
    if (horizon < 1 || last_change_step < 0 || last_change_step > horizon)
        throw DomainError("cts: last change step outside [0, T*N]");
    return 1.0 - static_cast<double>(last_change_step) / horizon;
}

double ses(std::span<const std::vector<double>> final_qvs) {
    if (final_qvs.empty()) throw DomainError("ses: no networks");
    double total = 0.0;
    for (const auto& qv : final_qvs) {
        double sq = 0.0;
        for (double v : qv) sq += v * v;
        total += std::sqrt(sq) / std::sqrt(static_cast<double>(qv.size()));
    }
    return total / static_cast<double>(final_qvs.size());
}

double weighted_score(double cq_mean, double anccs_score, double cts_score, double ses_score,
                      const ScoreWeights& w) {
    return w.cq * cq_mean + w.anccs * anccs_score + w.cts * cts_score + w.ses * ses_score;
}

EpisodeReport make_report(const LinkTable& table, std::span<const int> final_channels,
                          const ChangeTracker& tracker, int decision_points,
                          double sinr_target_db, const ScoreWeights& weights) {
    EpisodeReport r;
    r.final_qvs = all_quality_vectors(table, final_channels, sinr_target_db);
    r.final_channels.assign(final_channels.begin(), final_channels.end());
    r.change_counts.assign(tracker.counts().begin(), tracker.counts().end());
    r.last_change_step = tracker.last_change_step();
    const auto stats = cq_stats(r.final_qvs, r.final_channels);
    r.cq_mean = stats.mean;
    r.cq_median = stats.median;
    r.cq_min = stats.min;
    r.anccs = anccs(r.change_counts, decision_points);
    r.cts = cts(r.last_change_step, decision_points, table.network_count());
    r.ses = ses(r.final_qvs);
    r.weights = weights;
    r.ws = weighted_score(r.cq_mean, r.anccs, r.cts, r.ses, weights);
    return r;
}

} // namespace carlton

#pragma once

#include <span>
#include <vector>

#include "carlton/link_table.hpp"

namespace carlton {

struct ScoreWeights {
    double cq = 0.4;
    double anccs = 0.1;
    double cts = 0.4;
    double ses = 0.1;

    void validate() const;
};

struct CqStats {
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
};

/// Statistics of each network's quality on its final channel.
CqStats cq_stats(std::span<const std::vector<double>> final_qvs, std::span<const int> final_channels);

/// 1 - (mean channel changes per network) / T.
double anccs(std::span<const int> change_counts, int decision_points);

/// 1 - CT / (T N), CT = global 0-based step of the last change (0 if none).
double cts(int last_change_step, int decision_points, int n_networks);

/// Mean over networks of ||QV||_2 / sqrt(K).
double ses(std::span<const std::vector<double>> final_qvs);

double weighted_score(double cq_mean, double anccs_score, double cts_score, double ses_score,
                      const ScoreWeights& weights);

/// Channel-change bookkeeping over one episode.
class ChangeTracker {
public:
    explicit ChangeTracker(int n_networks) : counts_(static_cast<std::size_t>(n_networks), 0) {}

    void record(int network, int global_step) {
        ++counts_[static_cast<std::size_t>(network)];
        last_step_ = global_step;
        any_ = true;
    }
    std::span<const int> counts() const { return counts_; }
    int last_change_step() const { return any_ ? last_step_ : 0; }
    bool any_change() const { return any_; }

private:
    std::vector<int> counts_;
    int last_step_ = 0;
    bool any_ = false;
};

struct EpisodeReport {
    std::vector<std::vector<double>> final_qvs;
    std::vector<int> final_channels;
    std::vector<int> change_counts;
    int last_change_step = 0;
    double cq_mean = 0.0;
    double cq_median = 0.0;
    double cq_min = 0.0;
    double anccs = 0.0;
    double cts = 0.0;
    double ses = 0.0;
    double ws = 0.0;
    ScoreWeights weights;

    /// (mean CQ + min CQ) / 2, the per-episode quality figure compared
    /// across policies.
    double cq_combined() const { return 0.5 * (cq_mean + cq_min); }
};

EpisodeReport make_report(const LinkTable& table, std::span<const int> final_channels,
                          const ChangeTracker& tracker, int decision_points,
                          double sinr_target_db, const ScoreWeights& weights);

} // namespace carlton

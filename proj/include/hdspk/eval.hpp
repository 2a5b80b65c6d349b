#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdspk/glvq.hpp"
#include "hdspk/vsa.hpp"

namespace hdspk {

class UnclassifiableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RankEntry {
    int speaker_index = -1;
    double score = 0.0;
};

// Descending cosine score; ties broken by ascending speaker index (labels are
// sorted, so index order is id order).
using Ranking = std::vector<RankEntry>;

Ranking classify(const Eigen::Ref<const RealVec>& test_vec, const PrototypeSet& protos);

// 1-based position of the true speaker in a ranking.
int rank_of(const Ranking& ranking, int true_index);

double topk_accuracy(std::span<const Ranking> rankings, std::span<const int> true_indices, int k);

// Identity information (bits) delivered by a Top-1 accuracy p over n equally
// likely speakers; misclassifications spread uniformly over the other n-1.
double mutual_information(double top1, int n_speakers);

// Training energy per bit of information gain: active_params * seconds / bits.
double training_efficiency(double active_params, double train_time_seconds, double info_bits);

// Symmetric cosine matrix over profile rows; throws on a zero-norm profile.
Eigen::MatrixXd profile_correlation_matrix(const Eigen::MatrixXd& profile_rows);

// Mean of the off-diagonal entries; summarizes how much profiles overlap.
double mean_off_diagonal(const Eigen::MatrixXd& matrix);

struct ConfusionPair {
    int true_index = -1;
    int predicted_index = -1;
    int count = 0;
};

struct EvalReport {
    double top1 = 0.0;
    double top5 = 0.0;
    double top10 = 0.0;
    int n_test = 0;
    double mutual_info_bits = 0.0;
    double efficiency = 0.0;  // 0 when training time is unknown
    std::vector<ConfusionPair> confusion;  // misclassified pairs, most frequent first
};

EvalReport make_report(std::span<const Ranking> rankings, std::span<const int> true_indices,
                       int n_speakers, double active_params = 0.0,
                       double train_time_seconds = 0.0);

}  // namespace hdspk

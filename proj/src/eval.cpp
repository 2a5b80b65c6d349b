#include "hdspk/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hdspk {

Ranking classify(const Eigen::Ref<const RealVec>& test_vec, const PrototypeSet& protos) {
    if (protos.dim() != test_vec.size())
        throw std::invalid_argument("classify: dimension mismatch");
    const double x_norm = test_vec.norm();
    if (x_norm == 0.0) throw UnclassifiableError("classify: zero test vector");

    Ranking ranking(static_cast<std::size_t>(protos.size()));
    const Eigen::VectorXd dots = protos.prototypes * test_vec;
    for (int r = 0; r < protos.size(); ++r) {
        const double p_norm = protos.prototypes.row(r).norm();
        if (p_norm == 0.0)
            throw std::domain_error("classify: zero-norm prototype for speaker " +
                                    protos.labels[static_cast<std::size_t>(r)]);
        ranking[static_cast<std::size_t>(r)] = {r, dots[r] / (p_norm * x_norm)};
    }
    // Stable sort keeps ascending-index order among equal scores.
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.score > b.score; });
    return ranking;
}

int rank_of(const Ranking& ranking, int true_index) {
    for (std::size_t pos = 0; pos < ranking.size(); ++pos)
        if (ranking[pos].speaker_index == true_index) return static_cast<int>(pos) + 1;
    throw std::invalid_argument("rank_of: true speaker not present in ranking");
}

double topk_accuracy(std::span<const Ranking> rankings, std::span<const int> true_indices,
                     int k) {
    if (k < 1) throw std::invalid_argument("topk_accuracy: k must be >= 1");
    if (rankings.empty()) throw std::invalid_argument("topk_accuracy: empty test set");
    if (rankings.size() != true_indices.size())
        throw std::invalid_argument("topk_accuracy: ranking/label count mismatch");
    int hits = 0;
    for (std::size_t i = 0; i < rankings.size(); ++i)
        if (rank_of(rankings[i], true_indices[i]) <= k) ++hits;
    return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

double mutual_information(double top1, int n_speakers) {
    if (!(top1 >= 0.0 && top1 <= 1.0))
        throw std::invalid_argument("mutual_information: top1 must be in [0, 1]");
    if (n_speakers < 2) throw std::invalid_argument("mutual_information: need >= 2 speakers");
    const double n = static_cast<double>(n_speakers);
    const double p = top1;
    double conditional = 0.0;
    if (p > 0.0) conditional += p * std::log2(1.0 / p);
    if (p < 1.0) conditional += (1.0 - p) * std::log2((n - 1.0) / (1.0 - p));
    return std::log2(n) - conditional;
}

double training_efficiency(double active_params, double train_time_seconds, double info_bits) {
    if (!(active_params > 0.0))
        throw std::invalid_argument("training_efficiency: active parameter count must be > 0");
    if (!(train_time_seconds >= 0.0))
        throw std::invalid_argument("training_efficiency: training time must be >= 0");
    if (!(info_bits > 0.0))
        throw std::invalid_argument("training_efficiency: information gain must be > 0");
    return active_params * train_time_seconds / info_bits;
}

Eigen::MatrixXd profile_correlation_matrix(const Eigen::MatrixXd& profile_rows) {
    if (profile_rows.rows() < 2)
        throw std::invalid_argument("profile_correlation_matrix: need >= 2 profiles");
    Eigen::MatrixXd normalized = profile_rows;
    for (Eigen::Index r = 0; r < normalized.rows(); ++r) {
        const double norm = normalized.row(r).norm();
        if (norm == 0.0)
            throw std::domain_error("profile_correlation_matrix: zero-norm profile at row " +
                                    std::to_string(r));
        normalized.row(r) /= norm;
    }
    return normalized * normalized.transpose();
}

double mean_off_diagonal(const Eigen::MatrixXd& matrix) {
    const Eigen::Index n = matrix.rows();
    if (n < 2 || matrix.cols() != n)
        throw std::invalid_argument("mean_off_diagonal: need a square matrix of size >= 2");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) sum += matrix(i, j);
    return sum / static_cast<double>(n * (n - 1));
}

EvalReport make_report(std::span<const Ranking> rankings, std::span<const int> true_indices,
                       int n_speakers, double active_params, double train_time_seconds) {
    EvalReport report;
    report.n_test = static_cast<int>(rankings.size());
    report.top1 = topk_accuracy(rankings, true_indices, 1);
    report.top5 = topk_accuracy(rankings, true_indices, 5);
    report.top10 = topk_accuracy(rankings, true_indices, 10);
    report.mutual_info_bits = mutual_information(report.top1, n_speakers);
    if (train_time_seconds > 0.0 && active_params > 0.0 && report.mutual_info_bits > 0.0)
        report.efficiency =
            training_efficiency(active_params, train_time_seconds, report.mutual_info_bits);

    std::map<std::pair<int, int>, int> pairs;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        const int predicted = rankings[i].front().speaker_index;
        if (predicted != true_indices[i]) ++pairs[{true_indices[i], predicted}];
    }
    for (const auto& [key, count] : pairs)
        report.confusion.push_back({key.first, key.second, count});
    std::stable_sort(report.confusion.begin(), report.confusion.end(),
                     [](const ConfusionPair& a, const ConfusionPair& b) { return a.count > b.count; });
    return report;
}

}  // namespace hdspk

#pragma once

#include "spamlab/models.hpp"

namespace spamlab {

struct Neighbor {
    size_t index;     // position in the stored point set
    double distance;  // Minkowski-p distance
};

/// Exact nearest-neighbour index. Tree variants (ball tree on the dimension
/// of greatest spread, KD-tree on cycled dimensions, both with median
/// pivots) prune with branch-and-bound bounds and return exactly what brute
/// force returns, up to permutations among equal distances.
class NeighborIndex {
public:
    NeighborIndex(std::vector<std::vector<double>> points, std::vector<Label> labels,
                  const KnnHyper& cfg);

    size_t size() const { return points_.size(); }
    const KnnHyper& config() const { return cfg_; }
    Label label(size_t i) const { return labels_[i]; }

    /// k nearest (index, distance) pairs sorted by distance ascending.
    std::vector<Neighbor> query(const std::vector<double>& x, int k) const;

    /// Majority vote among the k nearest; tie -> smaller summed distance;
    /// still tied -> ham.
    Label predict(const std::vector<double>& x) const;

    /// Spam fraction among the k nearest.
    double spam_fraction(const std::vector<double>& x) const;

private:
    struct Node {
        // leaf: [begin, end) into order_; internal: split info + children
        size_t begin = 0, end = 0;
        int left = -1, right = -1;
        int split_dim = -1;
        double split_value = 0.0;
        // ball-tree bound: centroid + radius
        std::vector<double> center;
        double radius = 0.0;
    };

    void build_tree(size_t begin, size_t end, int depth, int node_id);
    void search(int node_id, const std::vector<double>& x, int k,
                std::vector<Neighbor>& heap) const;
    double minkowski(const std::vector<double>& a, const std::vector<double>& b) const;

    std::vector<std::vector<double>> points_;
    std::vector<Label> labels_;
    KnnHyper cfg_;
    std::vector<size_t> order_;  // permutation of point indices owned by leaves
    std::vector<Node> nodes_;
    int root_ = -1;
};

double minkowski_distance(const std::vector<double>& a, const std::vector<double>& b, double p);

std::unique_ptr<TrainedModel> fit_knn(const ClassifierSpec& spec, const FeatureMatrix& X);

}  // namespace spamlab

#include "spamlab/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using nlohmann::json;

namespace spamlab {

double minkowski_distance(const std::vector<double>& a, const std::vector<double>& b, double p) {
    if (a.size() != b.size()) throw InvalidArgument("minkowski_distance: dimension mismatch");
    if (p == 1.0) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::pow(std::fabs(a[i] - b[i]), p);
    return std::pow(s, 1.0 / p);
}

double NeighborIndex::minkowski(const std::vector<double>& a, const std::vector<double>& b) const {
    return minkowski_distance(a, b, cfg_.p);
}

NeighborIndex::NeighborIndex(std::vector<std::vector<double>> points, std::vector<Label> labels,
                             const KnnHyper& cfg)
    : points_(std::move(points)), labels_(std::move(labels)), cfg_(cfg) {
    if (points_.empty()) throw TrainingError("neighbor index requires at least one point");
    if (points_.size() != labels_.size()) throw InvalidArgument("points/labels length mismatch");
    if (cfg_.algorithm == KnnAlgorithm::Brute) return;

    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.emplace_back();
    root_ = 0;
    build_tree(0, points_.size(), 0, root_);
}

void NeighborIndex::build_tree(size_t begin, size_t end, int depth, int node_id) {
    Node& node = nodes_[node_id];
    node.begin = begin;
    node.end = end;

    const size_t dims = points_[0].size();
    // ball bound: centroid + covering radius (valid for any Minkowski p)
    node.center.assign(dims, 0.0);
    for (size_t i = begin; i < end; ++i) {
        const auto& pt = points_[order_[i]];
        for (size_t d = 0; d < dims; ++d) node.center[d] += pt[d];
    }
    for (auto& v : node.center) v /= static_cast<double>(end - begin);
    node.radius = 0.0;
    for (size_t i = begin; i < end; ++i) {
        node.radius = std::max(node.radius, minkowski(node.center, points_[order_[i]]));
    }

    if (end - begin <= static_cast<size_t>(cfg_.leaf_size)) return;

    int split_dim;
    if (cfg_.algorithm == KnnAlgorithm::BallTree) {
        // dimension of greatest spread
        split_dim = 0;
        double best_spread = -1.0;
        for (size_t d = 0; d < dims; ++d) {
            double lo = points_[order_[begin]][d], hi = lo;
            for (size_t i = begin + 1; i < end; ++i) {
                lo = std::min(lo, points_[order_[i]][d]);
                hi = std::max(hi, points_[order_[i]][d]);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                split_dim = static_cast<int>(d);
            }
        }
        if (best_spread <= 0.0) return;  // all points identical: keep as leaf
    } else {
        split_dim = depth % static_cast<int>(dims);
    }

    const size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](size_t a, size_t b) { return points_[a][split_dim] < points_[b][split_dim]; });
    node.split_dim = split_dim;
    node.split_value = points_[order_[mid]][split_dim];

    const int left_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const int right_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[node_id].left = left_id;
    nodes_[node_id].right = right_id;
    build_tree(begin, mid, depth + 1, left_id);
    build_tree(mid, end, depth + 1, right_id);
}

void NeighborIndex::search(int node_id, const std::vector<double>& x, int k,
                           std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[node_id];
    const double bound = std::max(0.0, minkowski(x, node.center) - node.radius);
    auto worse = [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    };
    if (static_cast<int>(heap.size()) == k && bound > heap.front().distance) return;

    if (node.left < 0) {
        for (size_t i = node.begin; i < node.end; ++i) {
            const size_t idx = order_[i];
            const double d = minkowski(x, points_[idx]);
            if (static_cast<int>(heap.size()) < k) {
                heap.push_back({idx, d});
                std::push_heap(heap.begin(), heap.end(), worse);
            } else if (d < heap.front().distance) {
                std::pop_heap(heap.begin(), heap.end(), worse);
                heap.back() = {idx, d};
                std::push_heap(heap.begin(), heap.end(), worse);
            }
        }
        return;
    }

    // nearer child first
    const bool left_first = x[node.split_dim] <= node.split_value;
    search(left_first ? node.left : node.right, x, k, heap);
    search(left_first ? node.right : node.left, x, k, heap);
}

std::vector<Neighbor> NeighborIndex::query(const std::vector<double>& x, int k) const {
    if (k < 1) throw InvalidArgument("knn query: k must be >= 1");
    if (static_cast<size_t>(k) > points_.size()) {
        throw InvalidArgument("knn query: k exceeds the stored point count");
    }
    std::vector<Neighbor> result;
    if (cfg_.algorithm == KnnAlgorithm::Brute || root_ < 0) {
        result.reserve(points_.size());
        for (size_t i = 0; i < points_.size(); ++i) result.push_back({i, minkowski(x, points_[i])});
        std::sort(result.begin(), result.end(), [](const Neighbor& a, const Neighbor& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
        });
        result.resize(static_cast<size_t>(k));
        return result;
    }
    search(root_, x, k, result);
    std::sort(result.begin(), result.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    });
    return result;
}

Label NeighborIndex::predict(const std::vector<double>& x) const {
    const auto neighbors = query(x, cfg_.k);
    int spam_votes = 0;
    double ham_dist = 0.0, spam_dist = 0.0;
    for (const auto& nb : neighbors) {
        if (labels_[nb.index] == Label::Spam) {
            ++spam_votes;
            spam_dist += nb.distance;
        } else {
            ham_dist += nb.distance;
        }
    }
    const int ham_votes = static_cast<int>(neighbors.size()) - spam_votes;
    if (spam_votes != ham_votes) return spam_votes > ham_votes ? Label::Spam : Label::Ham;
    if (spam_dist != ham_dist) return spam_dist < ham_dist ? Label::Spam : Label::Ham;
    return Label::Ham;
}

double NeighborIndex::spam_fraction(const std::vector<double>& x) const {
    const auto neighbors = query(x, cfg_.k);
    int spam_votes = 0;
    for (const auto& nb : neighbors) {
        if (labels_[nb.index] == Label::Spam) ++spam_votes;
    }
    return static_cast<double>(spam_votes) / static_cast<double>(neighbors.size());
}

namespace {

std::vector<double> to_double(const std::vector<uint32_t>& row) {
    return std::vector<double>(row.begin(), row.end());
}

class KnnTrainedModel : public TrainedModel {
public:
    KnnTrainedModel(ClassifierSpec spec, const FeatureMatrix& X)
        : TrainedModel(std::move(spec), X.dict_fingerprint),
          index_(
              [&] {
                  std::vector<std::vector<double>> pts;
                  pts.reserve(X.rows());
                  for (const auto& row : X.counts) pts.push_back(to_double(row));
                  return pts;
              }(),
              X.labels, std::get<KnnHyper>(this->spec().hyper)) {
        if (std::get<KnnHyper>(this->spec().hyper).k > static_cast<int>(X.rows())) {
            throw TrainingError("knn: k exceeds the training set size");
        }
    }

    std::vector<Label> predict(const FeatureMatrix& X) const override {
        check_compatible(X);
        std::vector<Label> out;
        out.reserve(X.rows());
        for (const auto& row : X.counts) out.push_back(index_.predict(to_double(row)));
        return out;
    }

protected:
    double score_row(const std::vector<uint32_t>& row) const override {
        return index_.spam_fraction(to_double(row));
    }

    void serialize_params(json& out) const override {
        // instance-based model: the training set is the parameter set
        out["n_points"] = index_.size();
        json labels = json::array();
        for (size_t i = 0; i < index_.size(); ++i) labels.push_back(index_.label(i) == Label::Spam);
        out["spam_flags"] = labels;
    }

private:
    NeighborIndex index_;
};

}  // namespace

std::unique_ptr<TrainedModel> fit_knn(const ClassifierSpec& spec, const FeatureMatrix& X) {
    return std::make_unique<KnnTrainedModel>(spec, X);
}

}  // namespace spamlab

#pragma once
// Text embedding port. Live runs can plug in a remote embedding service;
// tests and offline runs use a deterministic hashed bag-of-tokens embedder.

#include <cmath>
#include <string>
#include <vector>

#include "digest.hpp"
#include "errors.hpp"
#include "text.hpp"

namespace hypoforge {

class Embedder {
  public:
    virtual ~Embedder() = default;
    virtual std::vector<double> embed(const std::string& text) const = 0;
    virtual int dimension() const = 0;
};

// Hashes lowercase alphanumeric tokens into a fixed number of buckets and
// L2-normalizes the counts. Fully deterministic, no model weights; vectors
// are non-negative, so cosine similarities are always in [0, 1].
class HashedTokenEmbedder : public Embedder {
  public:
    explicit HashedTokenEmbedder(int dimension = 64) : dim_(dimension) {
        if (dimension < 1) throw InputError("embedder dimension must be >= 1");
    }

    int dimension() const override { return dim_; }

    std::vector<double> embed(const std::string& text) const override {
        std::vector<double> v(dim_, 0.0);
        for (const std::string& tok : alnum_tokens(text))
            v[fnv1a64(tok) % static_cast<uint64_t>(dim_)] += 1.0;
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& x : v) x /= norm;
        }
        return v;
    }

  private:
    int dim_;
};

}  // namespace hypoforge

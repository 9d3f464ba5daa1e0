#pragma once
// Temporal holdout evaluation by embedding similarity: each generated
// hypothesis is compared against the later-published "gold" finding it was
// paired with, and the matched similarities are judged against a null
// distribution built from gold texts that answer different background
// questions. If generation is doing better than chance, the matched
// distribution should sit clearly above the null.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "../csv.hpp"
#include "../embed.hpp"
#include "../errors.hpp"

namespace hypoforge {

inline double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DomainError("vectors differ in dimension");
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) throw DomainError("cosine undefined for a zero vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// A later-published finding used as ground truth; background_id says which
// input question it belongs to, so the null distribution can be restricted
// to cross-background pairs.
struct GoldHypothesis {
    std::string text;
    std::string background_id;
};

struct SimilarityEval {
    std::vector<double> matched;  // one per generated/gold pair
    std::vector<double> null_sims;  // gold-vs-gold across different backgrounds
    double matched_median = 0.0;
    double null_median = 0.0;
};

namespace detail {

inline double median_of(std::vector<double> xs) {
    if (xs.empty()) throw InputError("median of an empty set");
    std::sort(xs.begin(), xs.end());
    size_t n = xs.size();
    return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

}  // namespace detail

// pairing[i] is the index into `gold` that generated[i] is evaluated
// against. The null distribution is every unordered pair of gold texts whose
// background ids differ (deliberately unrelated findings).
inline SimilarityEval temporal_similarity_eval(const std::vector<std::string>& generated,
                                               const std::vector<GoldHypothesis>& gold,
                                               const std::vector<size_t>& pairing,
                                               const Embedder& embedder) {
    if (gold.empty()) throw InputError("no gold hypotheses");
    if (generated.size() != pairing.size())
        throw InputError("pairing must cover every generated hypothesis");
    for (size_t g : pairing)
        if (g >= gold.size()) throw InputError("pairing index out of range");

    std::vector<std::vector<double>> gold_vecs;
    gold_vecs.reserve(gold.size());
    for (const auto& g : gold) gold_vecs.push_back(embedder.embed(g.text));

    SimilarityEval eval;
    for (size_t i = 0; i < generated.size(); ++i)
        eval.matched.push_back(cosine_similarity(embedder.embed(generated[i]), gold_vecs[pairing[i]]));
    for (size_t i = 0; i < gold.size(); ++i)
        for (size_t j = i + 1; j < gold.size(); ++j)
            if (gold[i].background_id != gold[j].background_id)
                eval.null_sims.push_back(cosine_similarity(gold_vecs[i], gold_vecs[j]));

    if (!eval.matched.empty()) eval.matched_median = detail::median_of(eval.matched);
    if (!eval.null_sims.empty()) eval.null_median = detail::median_of(eval.null_sims);
    return eval;
}

// Two-column CSV (pair_type, similarity) with both distributions stacked;
// ready for plotting as overlaid histograms.
inline void write_similarity_csv(const SimilarityEval& eval, std::ostream& out) {
    write_csv_row(out, {"pair_type", "similarity"});
    char buf[32];
    for (double s : eval.matched) {
        std::snprintf(buf, sizeof buf, "%.6f", s);
        write_csv_row(out, {"matched", buf});
    }
    for (double s : eval.null_sims) {
        std::snprintf(buf, sizeof buf, "%.6f", s);
        write_csv_row(out, {"null", buf});
    }
}

}  // namespace hypoforge

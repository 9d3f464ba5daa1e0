#pragma once
// Reply fixtures exercised by the parser tests and the acceptance gate.
// The full critic block follows the published output format (score line plus
// one-sentence rationale per metric); the minimal variants keep only lines
// whose removal must make the reply unparseable, so that every
// single-line-deleted mutant is rejected.

#include <string>
#include <vector>

namespace fixtures {

// Critic reply with rationales, format: "<Metric>: Score <X>" then one
// rationale sentence per metric, then the overall line.
inline const char* kCriticFull =
    "Novelty: Score 4\n"
    "Introduces a regulatory axis not stated in the input summary.\n"
    "Relevance: Score 5\n"
    "Directly addresses GPR153 signalling in the injured vessel wall.\n"
    "Significance: Score 4\n"
    "Could nominate a druggable target for restenosis.\n"
    "Verifiability: Score 4\n"
    "Testable with knockdown followed by transcriptomic readouts.\n"
    "Overall Score: 17/20";

// Same scores without rationales: every remaining line is load-bearing.
inline const char* kCriticMinimal =
    "Novelty: Score 4\n"
    "Relevance: Score 5\n"
    "Significance: Score 4\n"
    "Verifiability: Score 4\n"
    "Overall Score: 17/20";

// The three-line reviewer directive with the documented action tokens.
inline const char* kDirective =
    "ACTIONS:neo4j,pubmed\n"
    "DEPTH_OVERRIDE:3\n"
    "RELS_OVERRIDE:protein_protein,associated_with";

// Pairwise head-to-head verdicts: one standalone A/B/0 per metric line.
inline const char* kPairwise =
    "Novelty: A - introduces a mechanism absent from the rival text.\n"
    "Relevance: 0 - both address the stated input equally well.\n"
    "Significance: B - only one links the mechanism to a clinical endpoint.\n"
    "Verifiability: A - it names an assay that can test the claim.";

// Relation labels drawn from the classifier's class vocabulary.
inline const std::vector<std::string> kRelationReplies = {
    "Relation: positive",
    "Relation: negative",
    "Relation: stimulate",
    "Relation: inhibit",
};

// All variants of `text` with exactly one line removed.
inline std::vector<std::string> line_deleted_mutants(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    std::vector<std::string> mutants;
    for (std::size_t skip = 0; skip < lines.size(); ++skip) {
        std::string m;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (i == skip) continue;
            if (!m.empty()) m += '\n';
            m += lines[i];
        }
        mutants.push_back(m);
    }
    return mutants;
}

}  // namespace fixtures

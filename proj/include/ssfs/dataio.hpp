#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ssfs {

struct FeatureRanking;  // defined in pipeline.hpp

// Observation matrix: rows are samples, columns are features.
struct DataMatrix {
    Eigen::MatrixXd values;                  // n x p, all entries finite
    std::vector<std::string> feature_names;  // size p
    bool normalized = false;                 // set by zscore_normalize

    int n() const { return static_cast<int>(values.rows()); }
    int p() const { return static_cast<int>(values.cols()); }
};

// Matrix plus ground-truth class ids re-encoded to 0..num_classes-1.
struct LabeledDataset {
    DataMatrix data;
    std::vector<int> labels;
    int num_classes = 0;
};

// Parses a comma-delimited numeric table. Feature names come from the header
// row when has_header, otherwise f0..f{p-1}. Throws std::runtime_error with
// the 0-based row (and column) of the offense for ragged or non-numeric input.
DataMatrix load_matrix(const std::string& path, bool has_header);

// Same, but extracts the named column as class labels (values may be
// arbitrary strings; ids are assigned in order of first appearance).
LabeledDataset load_labeled_matrix(const std::string& path, bool has_header,
                                   const std::string& label_column);

// Per-column standardization with the sample (n-1) denominator.
// Zero-variance columns become all-zero. Idempotent.
DataMatrix zscore_normalize(const DataMatrix& x);

// Writes rows "rank,feature_index,feature_name,score" (with that header) in
// rank order, scores at 10 significant digits. top_l <= 0 writes all rows.
void write_ranking(const FeatureRanking& r, const std::string& path, int top_l = 0);

// Writes the matrix as CSV at full precision (%.17g), so that
// save_matrix + load_matrix round-trips values exactly.
void save_matrix(const DataMatrix& x, const std::string& path, bool with_header);

} // namespace ssfs

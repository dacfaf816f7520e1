#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "brixkit/errors.hpp"

namespace brixkit {

/// Range of the refractometer the labels were measured with.
constexpr double kBrixMin = 9.0;
constexpr double kBrixMax = 26.0;

/// One labeled bunch image: a row of the dataset manifest.
struct SampleRecord {
    std::string sample_id;
    std::string image_path;          // relative to the manifest location
    char atomic_split = 'A';         // A..I
    int year = 0;
    std::string device;              // e.g. motog8, realme, reflex, d435i
    std::string image_format;        // "jpg" or "raw_wb"
    std::optional<double> brix_top;
    std::optional<double> brix_mid;
    std::optional<double> brix_bot;
    double brix_mean = 0.0;
    std::optional<int> color_class;  // 1..6, 1 is best
    bool gray_card = false;

    void validate() const; // throws BrixOutOfRange / UnknownAtomicSplit / MalformedRow
};

/// Named train/test composition of atomic splits.
struct DatasetSplit {
    std::string name;
    std::vector<SampleRecord> train;
    std::vector<SampleRecord> test; // empty for the Simple splits
};

/// Descriptive statistics of the brix labels in one sample list.
struct SplitStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0; // sample standard deviation (n-1)
    double mad = 0.0;     // mean |x - mean|
};

/// Exact manifest header, in column order.
extern const char* const kManifestHeader;

/// All seven split identifiers accepted by build_split.
const std::vector<std::string>& split_names();

/// Parse a manifest CSV. The first line must match kManifestHeader exactly;
/// optional fields are empty cells; booleans are true/false. Invariants are
/// enforced per row (mean within refractometer range, three-point average
/// consistency, color class domain).
std::vector<SampleRecord> load_manifest(const std::filesystem::path& path);

/// Write records back out in manifest format (used by the synthetic generator).
void save_manifest(const std::vector<SampleRecord>& records, const std::filesystem::path& path);

/// Assemble a named experimental split from manifest rows:
///   Sm_j / Sm_w : C+D, all in train, no test
///   Ss_j        : A+C+D jpg -> F+H+I jpg       (phone devices)
///   Ss_w        : B+C+D wb  -> F+H+I wb        (phone devices)
///   Ss_a        : B+C+D wb  -> F+H+I wb        (phone + reflex)
///   Ms_j        : A+C+D+H+I jpg -> F jpg       (all devices)
///   Ms_w        : B+C+D+H+I wb  -> F wb        (all devices, d435i rgb counts as wb-eligible)
DatasetSplit build_split(const std::vector<SampleRecord>& records, const std::string& name);

/// Mean / sample std / mean absolute deviation of the brix labels.
SplitStats split_stats(const std::vector<SampleRecord>& samples);
SplitStats split_stats(const std::vector<double>& brix_values);

} // namespace brixkit

#include "brixkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "brixkit/format.hpp"

namespace brixkit {

const char* const kManifestHeader =
    "sample_id,image_path,atomic_split,year,device,image_format,"
    "brix_top,brix_mid,brix_bot,brix_mean,color_class,gray_card";

const std::vector<std::string>& split_names() {
    static const std::vector<std::string> names = {"Sm_j", "Sm_w", "Ss_j", "Ss_w",
                                                   "Ss_a", "Ms_j", "Ms_w"};
    return names;
}

void SampleRecord::validate() const {
    if (atomic_split < 'A' || atomic_split > 'I')
        throw Error(ErrorCode::UnknownAtomicSplit,
                    "sample '" + sample_id + "' has atomic split '" + std::string(1, atomic_split) +
                        "' (expected A..I)");
    if (brix_mean < kBrixMin || brix_mean > kBrixMax)
        throw Error(ErrorCode::BrixOutOfRange,
                    "sample '" + sample_id + "' brix_mean " + format_double(brix_mean) +
                        " outside refractometer range [9, 26]");
    if (brix_top && brix_mid && brix_bot) {
        const double mean = (*brix_top + *brix_mid + *brix_bot) / 3.0;
        if (std::abs(mean - brix_mean) > 1e-9)
            throw Error(ErrorCode::MalformedRow,
                        "sample '" + sample_id + "' brix_mean " + format_double(brix_mean) +
                            " is not the average of its three point measurements");
    }
    if (color_class && (*color_class < 1 || *color_class > 6))
        throw Error(ErrorCode::MalformedRow,
                    "sample '" + sample_id + "' color_class outside 1..6");
    if (image_format != "jpg" && image_format != "raw_wb")
        throw Error(ErrorCode::MalformedRow,
                    "sample '" + sample_id + "' image_format must be jpg or raw_wb");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& s, std::size_t line_no, const char* field) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) malformed(line_no, std::string(field) + " is not a number: '" + s + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        malformed(line_no, std::string(field) + " is not a number: '" + s + "'");
    }
}

int parse_int(const std::string& s, std::size_t line_no, const char* field) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) malformed(line_no, std::string(field) + " is not an integer: '" + s + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        malformed(line_no, std::string(field) + " is not an integer: '" + s + "'");
    }
}

bool parse_bool(const std::string& s, std::size_t line_no, const char* field) {
    if (s == "true") return true;
    if (s == "false") return false;
    malformed(line_no, std::string(field) + " must be true or false, got '" + s + "'");
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

// Device families used by the split compositions.
bool is_depth_camera(const std::string& device) { return device == "d435i"; }
bool is_reflex(const std::string& device) { return device == "reflex"; }
bool is_phone(const std::string& device) { return !is_depth_camera(device) && !is_reflex(device); }

enum class DeviceFilter { Phone, PhoneReflex, Any };

bool device_allowed(const SampleRecord& r, DeviceFilter f) {
    switch (f) {
        case DeviceFilter::Phone: return is_phone(r.device);
        case DeviceFilter::PhoneReflex: return is_phone(r.device) || is_reflex(r.device);
        case DeviceFilter::Any: return true;
    }
    return true;
}

enum class FormatFilter {
    Jpg,       // standard camera output
    Wb,        // white-balanced raw
    WbOrDepth, // white-balanced raw, plus d435i rgb which has no raw counterpart
};

bool format_allowed(const SampleRecord& r, FormatFilter f) {
    switch (f) {
        case FormatFilter::Jpg: return r.image_format == "jpg";
        case FormatFilter::Wb: return r.image_format == "raw_wb";
        case FormatFilter::WbOrDepth:
            return r.image_format == "raw_wb" || is_depth_camera(r.device);
    }
    return false;
}

struct SplitRule {
    std::string atoms_train;
    std::string atoms_test; // empty -> no test set
    FormatFilter format;
    DeviceFilter device;
};

SplitRule rule_for(const std::string& name) {
    if (name == "Sm_j") return {"CD", "", FormatFilter::Jpg, DeviceFilter::Phone};
    if (name == "Sm_w") return {"CD", "", FormatFilter::Wb, DeviceFilter::Phone};
    if (name == "Ss_j") return {"ACD", "FHI", FormatFilter::Jpg, DeviceFilter::Phone};
    if (name == "Ss_w") return {"BCD", "FHI", FormatFilter::Wb, DeviceFilter::Phone};
    if (name == "Ss_a") return {"BCD", "FHI", FormatFilter::Wb, DeviceFilter::PhoneReflex};
    if (name == "Ms_j") return {"ACDHI", "F", FormatFilter::Jpg, DeviceFilter::Any};
    if (name == "Ms_w") return {"BCDHI", "F", FormatFilter::WbOrDepth, DeviceFilter::Any};
    throw Error(ErrorCode::UnknownSplitName, "'" + name + "' is not one of the split identifiers");
}

} // namespace

std::vector<SampleRecord> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open manifest '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::MalformedRow, "line 1: manifest is empty");
    if (strip_cr(line) != kManifestHeader)
        throw Error(ErrorCode::MalformedRow,
                    "line 1: header does not match '" + std::string(kManifestHeader) + "'");

    std::vector<SampleRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 12)
            malformed(line_no, "expected 12 fields, got " + std::to_string(f.size()));

        SampleRecord r;
        r.sample_id = f[0];
        r.image_path = f[1];
        if (r.sample_id.empty()) malformed(line_no, "sample_id is empty");
        if (f[2].size() != 1)
            throw Error(ErrorCode::UnknownAtomicSplit,
                        "line " + std::to_string(line_no) + ": atomic split '" + f[2] + "'");
        r.atomic_split = f[2][0];
        r.year = parse_int(f[3], line_no, "year");
        r.device = f[4];
        r.image_format = f[5];
        if (!f[6].empty()) r.brix_top = parse_double(f[6], line_no, "brix_top");
        if (!f[7].empty()) r.brix_mid = parse_double(f[7], line_no, "brix_mid");
        if (!f[8].empty()) r.brix_bot = parse_double(f[8], line_no, "brix_bot");
        if (f[9].empty()) malformed(line_no, "brix_mean is required");
        r.brix_mean = parse_double(f[9], line_no, "brix_mean");
        if (!f[10].empty()) r.color_class = parse_int(f[10], line_no, "color_class");
        r.gray_card = parse_bool(f[11], line_no, "gray_card");

        try {
            r.validate();
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.message());
        }
        records.push_back(std::move(r));
    }
    return records;
}

void save_manifest(const std::vector<SampleRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write manifest '" + path.string() + "'");
    out << kManifestHeader << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const SampleRecord& r : records) {
        out << r.sample_id << ',' << r.image_path << ',' << r.atomic_split << ',' << r.year << ','
            << r.device << ',' << r.image_format << ',' << opt(r.brix_top) << ',' << opt(r.brix_mid)
            << ',' << opt(r.brix_bot) << ',' << format_double(r.brix_mean) << ','
            << (r.color_class ? std::to_string(*r.color_class) : std::string()) << ','
            << (r.gray_card ? "true" : "false") << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

DatasetSplit build_split(const std::vector<SampleRecord>& records, const std::string& name) {
    const SplitRule rule = rule_for(name);
    DatasetSplit split;
    split.name = name;
    for (const SampleRecord& r : records) {
        if (!format_allowed(r, rule.format) || !device_allowed(r, rule.device)) continue;
        if (rule.atoms_train.find(r.atomic_split) != std::string::npos)
            split.train.push_back(r);
        else if (rule.atoms_test.find(r.atomic_split) != std::string::npos)
            split.test.push_back(r);
    }
    // Same physical sample must not sit on both sides.
    std::unordered_set<std::string> train_ids;
    for (const SampleRecord& r : split.train) train_ids.insert(r.sample_id);
    for (const SampleRecord& r : split.test)
        if (train_ids.count(r.sample_id))
            throw Error(ErrorCode::InvalidInput,
                        "sample '" + r.sample_id + "' appears in both train and test of " + name);
    return split;
}

SplitStats split_stats(const std::vector<double>& brix_values) {
    if (brix_values.empty()) throw Error(ErrorCode::EmptyInput, "no samples to summarize");
    const std::size_t n = brix_values.size();
    double sum = 0.0;
    for (double v : brix_values) sum += v;
    const double mean = sum / static_cast<double>(n);

    double sq = 0.0, abs_dev = 0.0;
    for (double v : brix_values) {
        sq += (v - mean) * (v - mean);
        abs_dev += std::abs(v - mean);
    }
    SplitStats stats;
    stats.count = n;
    stats.mean = mean;
    stats.std_dev = n > 1 ? std::sqrt(sq / static_cast<double>(n - 1)) : 0.0;
    stats.mad = abs_dev / static_cast<double>(n);
    return stats;
}

SplitStats split_stats(const std::vector<SampleRecord>& samples) {
    std::vector<double> brix;
    brix.reserve(samples.size());
    for (const SampleRecord& r : samples) brix.push_back(r.brix_mean);
    return split_stats(brix);
}

} // namespace brixkit

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace sgs::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; "nan"/"inf" for non-finite values.
std::string format_number(double value);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& cell(double value);
    CsvWriter& cell(long long value);
    CsvWriter& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
    CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
    CsvWriter& cell(bool value) { return cell(static_cast<long long>(value ? 1 : 0)); }
    CsvWriter& cell(const std::string& value);
    void end_row();

private:
    void separator();

    std::ofstream out_;
    std::filesystem::path path_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

void write_json(const std::filesystem::path& path, const Json& value);

/// Hex SHA-256 of a file's bytes. Throws IoError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// Output directory: the --out value if given, else $SGS_OUTPUT_DIR, else ./sgs-output.
std::filesystem::path resolve_output_dir(const std::string& flag_value);

struct ManifestInput {
    std::string flag;
    std::filesystem::path path;
};

/// Writes manifest.json next to the outputs.
void write_manifest(const std::filesystem::path& dir, const std::string& command, const Json& flags,
                    const std::vector<ManifestInput>& inputs, std::uint64_t seed,
                    const std::vector<std::string>& argv);

} // namespace sgs::cli

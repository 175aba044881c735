#include "output.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <memory>

#include <sgs/error.hpp>

namespace sgs::cli {

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0; // drop the sign of -0
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), columns_(header.size())
{
    require(bool(out_), ErrorKind::IoError, "cannot write " + path.string());
    for (const auto& h : header) cell(h);
    end_row();
}

void CsvWriter::separator()
{
    if (filled_ > 0) out_ << ',';
    ++filled_;
}

CsvWriter& CsvWriter::cell(double value)
{
    separator();
    out_ << format_number(value);
    return *this;
}

CsvWriter& CsvWriter::cell(long long value)
{
    separator();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::cell(const std::string& value)
{
    separator();
    if (value.find_first_of(",\"\n") == std::string::npos) {
        out_ << value;
        return *this;
    }
    out_ << '"';
    for (char c : value) {
        if (c == '"') out_ << '"';
        out_ << c;
    }
    out_ << '"';
    return *this;
}

void CsvWriter::end_row()
{
    require(filled_ == columns_, ErrorKind::LengthMismatch, "row width mismatch in " + path_.string());
    out_ << '\n';
    filled_ = 0;
    require(bool(out_), ErrorKind::IoError, "write failed: " + path_.string());
}

void write_json(const std::filesystem::path& path, const Json& value)
{
    std::ofstream out(path, std::ios::binary);
    require(bool(out), ErrorKind::IoError, "cannot write " + path.string());
    out << value.dump(2) << '\n';
    require(bool(out), ErrorKind::IoError, "write failed: " + path.string());
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    require(bool(in), ErrorKind::IoError, "cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    require(ctx && EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) == 1, ErrorKind::IoError,
            "sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), std::size_t(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string s;
    for (unsigned i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

std::filesystem::path resolve_output_dir(const std::string& flag_value)
{
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SGS_OUTPUT_DIR"); env && *env) return env;
    return "sgs-output";
}

namespace {

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

} // namespace

void write_manifest(const std::filesystem::path& dir, const std::string& command, const Json& flags,
                    const std::vector<ManifestInput>& inputs, std::uint64_t seed,
                    const std::vector<std::string>& argv)
{
    Json m;
    m["schema_version"] = kSchemaVersion;
    m["command"] = command;
    m["argv"] = argv;
    m["flags"] = flags;
    Json files = Json::array();
    for (const auto& in : inputs) {
        files.push_back({{"flag", in.flag},
                         {"path", in.path.string()},
                         {"bytes", std::filesystem::file_size(in.path)},
                         {"sha256", sha256_file(in.path)}});
    }
    m["inputs"] = files;
    m["seed"] = seed;
    m["library_version"] = SGS_VERSION;
    m["timestamp"] = utc_timestamp();
    write_json(dir / "manifest.json", m);
}

} // namespace sgs::cli

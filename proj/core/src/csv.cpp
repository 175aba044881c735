#include "sgs/csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "sgs/error.hpp"

namespace sgs::csv {
namespace {

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
            field.remove_suffix(1);
        if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
            field = field.substr(1, field.size() - 2);
        }
        fields.push_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::optional<double> parse_double(std::string_view s)
{
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

struct Table {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> line_numbers;
};

Table read_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    require(in.good(), ErrorKind::IoError, "cannot open " + path.string());

    Table table;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.find_first_not_of(" \t") == std::string_view::npos) continue;

        const auto fields = split_fields(view);
        std::vector<double> values;
        values.reserve(fields.size());
        bool numeric = true;
        for (auto f : fields) {
            auto v = parse_double(f);
            if (!v) {
                numeric = false;
                break;
            }
            values.push_back(*v);
        }
        if (!numeric) {
            if (first_content) {
                // header row
                first_content = false;
                width = fields.size();
                continue;
            }
            fail(ErrorKind::ParseError,
                 path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
        }
        if (width == 0) width = values.size();
        if (values.size() != width) {
            fail(ErrorKind::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                            std::to_string(width) + " fields, found " +
                                            std::to_string(values.size()));
        }
        first_content = false;
        table.rows.push_back(std::move(values));
        table.line_numbers.push_back(line_no);
    }
    require(!table.rows.empty(), ErrorKind::ParseError, path.string() + ": no data rows");
    return table;
}

} // namespace

Matrix read_matrix(const std::filesystem::path& path)
{
    const auto table = read_table(path);
    const auto n = static_cast<Index>(table.rows.size());
    const auto p = static_cast<Index>(table.rows.front().size());
    Matrix X(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) X(i, j) = table.rows[std::size_t(i)][std::size_t(j)];
    return X;
}

Vector read_vector(const std::filesystem::path& path)
{
    const auto table = read_table(path);
    if (table.rows.front().size() != 1) {
        fail(ErrorKind::ParseError, path.string() + ":" + std::to_string(table.line_numbers.front()) +
                                        ": expected a single column");
    }
    Vector y(static_cast<Index>(table.rows.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i) y[Index(i)] = table.rows[i][0];
    return y;
}

GroupPartition read_groups(const std::filesystem::path& path, std::size_t p)
{
    const auto table = read_table(path);
    if (table.rows.front().size() != 2) {
        fail(ErrorKind::ParseError, path.string() + ":" + std::to_string(table.line_numbers.front()) +
                                        ": expected `variable_index,group_id`");
    }
    std::map<long long, std::vector<std::size_t>> by_id;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double idx = table.rows[r][0];
        const double gid = table.rows[r][1];
        const auto where = path.string() + ":" + std::to_string(table.line_numbers[r]);
        if (idx < 0 || idx != static_cast<double>(static_cast<long long>(idx)))
            fail(ErrorKind::ParseError, where + ": variable index must be a non-negative integer");
        if (gid != static_cast<double>(static_cast<long long>(gid)))
            fail(ErrorKind::ParseError, where + ": group id must be an integer");
        if (static_cast<std::size_t>(idx) >= p)
            fail(ErrorKind::ParseError, where + ": variable index " + std::to_string(std::size_t(idx)) +
                                            " outside 0.." + std::to_string(p - 1));
        by_id[static_cast<long long>(gid)].push_back(static_cast<std::size_t>(idx));
    }
    std::vector<std::vector<std::size_t>> members;
    members.reserve(by_id.size());
    for (auto& [id, list] : by_id) members.push_back(std::move(list));
    return GroupPartition::from_members(members, p);
}

GroupedDataset load_dataset(const std::filesystem::path& x_path, const std::filesystem::path& y_path,
                            const std::filesystem::path& groups_path, Family family)
{
    Matrix X = read_matrix(x_path);
    Vector y = read_vector(y_path);
    auto partition = read_groups(groups_path, static_cast<std::size_t>(X.cols()));
    return GroupedDataset(std::move(X), std::move(y), std::move(partition), family);
}

} // namespace sgs::csv

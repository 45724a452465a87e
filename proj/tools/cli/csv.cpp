#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>

#include <hdcp/error.hpp>

namespace hdcp::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_cell(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    if (cell.front() == '+') cell.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc{} && ptr == cell.data() + cell.size();
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

Matrix read_table(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t j = 0; j < cells.size(); ++j) numeric = numeric && parse_cell(cells[j], row[j]);
        if (!numeric) {
            require(rows.empty() && line_no == 1, ErrorKind::MalformedInput,
                    "non-numeric cell on line " + std::to_string(line_no));
            continue;  // header
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail(ErrorKind::MalformedInput, "line " + std::to_string(line_no) + " has " +
                                                std::to_string(row.size()) + " cells, expected " +
                                                std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorKind::MalformedInput, "no numeric rows");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

Matrix read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::MalformedInput, "cannot open " + path.string());
    try {
        return read_table(in);
    } catch (const Error& e) {
        const std::string_view msg = e.what();
        fail(e.kind(), path.string() + ": " + std::string(msg.substr(msg.find(": ") + 2)));
    }
}

Matrix read_panel(const std::filesystem::path& path, bool transpose) {
    const Matrix m = read_table(path);
    return transpose ? m : Matrix(m.transpose());
}

Vector read_vector(const std::filesystem::path& path) {
    const Matrix m = read_table(path);
    require(m.rows() == 1 || m.cols() == 1, ErrorKind::MalformedInput,
            path.string() + ": expected a single row or column");
    return m.reshaped();
}

}  // namespace hdcp::cli

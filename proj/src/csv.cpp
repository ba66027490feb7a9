#include "reident/csv.hpp"

#include <sstream>

namespace reident {

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool cell_started = false;
    bool row_started = false;

    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
        cell_started = false;
    };
    auto end_row = [&] {
        end_cell();
        if (table.header.empty()) {
            table.header = std::move(row);
        } else {
            table.rows.push_back(std::move(row));
        }
        row.clear();
        row_started = false;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    cell.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!cell_started || cell.empty()) {
                    in_quotes = true;
                    cell_started = true;
                    row_started = true;
                } else {
                    cell.push_back(c);  // stray quote mid-cell, keep literally
                }
                break;
            case ',':
                end_cell();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_started || cell_started || !cell.empty()) end_row();
                break;
            default:
                cell.push_back(c);
                cell_started = true;
                row_started = true;
                break;
        }
    }
    if (in_quotes) throw CsvError("unterminated quoted cell at end of input");
    if (row_started || cell_started || !cell.empty()) end_row();
    return table;
}

namespace {

bool needs_quoting(const std::string& cell) {
    if (cell.empty()) return false;
    if (cell.front() == ' ' || cell.back() == ' ') return true;
    return cell.find_first_of(",\"\n\r") != std::string::npos;
}

}  // namespace

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        const std::string& cell = cells[i];
        if (needs_quoting(cell)) {
            out << '"';
            for (char c : cell) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << cell;
        }
    }
    out << '\n';
}

std::vector<std::string> split_multi(const std::string& cell) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(cell);
    while (std::getline(ss, item, ';')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join_multi(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out.push_back(';');
        out += items[i];
    }
    return out;
}

}  // namespace reident

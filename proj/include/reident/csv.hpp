#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace reident {

class CsvError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Header row plus data rows. Record numbers are 1-based with the header as
/// record 1, so the first data row reports as record 2.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 style: comma separators, double-quote escaping, quoted cells may
/// embed commas, quotes and newlines. CRLF and a trailing newline are
/// accepted. Throws CsvError on an unterminated quote.
CsvTable read_csv(std::istream& in);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

// Multi-valued cells use semicolons within one CSV cell.
std::vector<std::string> split_multi(const std::string& cell);
std::string join_multi(const std::vector<std::string>& items);

}  // namespace reident

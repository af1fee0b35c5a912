#include "qss/encoding.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qss {

namespace {

std::string to_bitstring(std::uint64_t value, int width) {
    std::string s(width, '0');
    for (int k = 0; k < width; ++k)
        if (value & (std::uint64_t{1} << (width - 1 - k))) s[k] = '1';
    return s;
}

const char* kCellKeys[2][2] = {{"Z0", "Z1"}, {"X0", "X1"}};

}  // namespace

EncodingTable parity_table(int num_shares) {
    if (num_shares < 2)
        throw std::invalid_argument("parity table needs at least two shares");
    EncodingTable t;
    t.name = "parity";
    t.num_shares = num_shares;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << num_shares); ++v) {
        const int parity = __builtin_parityll(v);
        const std::string pattern = to_bitstring(v, num_shares);
        t.cells[0][parity].push_back(pattern);
        t.cells[1][parity].push_back(pattern);
    }
    return t;
}

std::string encode(const EncodingTable& table, int basis_bit, int secret_bit,
                   double rand) {
    const auto& cell = table.cell(basis_bit, secret_bit);
    if (cell.empty())
        throw std::invalid_argument("encoding cell is empty (malformed table)");
    std::size_t idx = static_cast<std::size_t>(rand * cell.size());
    if (idx >= cell.size()) idx = cell.size() - 1;
    return cell[idx];
}

std::optional<int> decode(const EncodingTable& table, int basis_bit,
                          const std::string& pattern) {
    for (int s = 0; s < 2; ++s) {
        const auto& cell = table.cell(basis_bit, s);
        if (std::find(cell.begin(), cell.end(), pattern) != cell.end())
            return s;
    }
    return std::nullopt;
}

std::vector<std::string> validate(const EncodingTable& table) {
    std::vector<std::string> out;
    if (table.num_shares < 2)
        out.push_back("num_shares must be >= 2");
    for (int b = 0; b < 2; ++b) {
        std::set<std::string> seen;
        std::size_t total = 0;
        for (int s = 0; s < 2; ++s) {
            const auto& cell = table.cells[b][s];
            const std::string label = kCellKeys[b][s];
            if (cell.empty()) out.push_back("cell " + label + " is empty");
            for (const auto& p : cell) {
                ++total;
                if (static_cast<int>(p.size()) != table.num_shares)
                    out.push_back("cell " + label + ": pattern '" + p +
                                  "' has wrong length");
                if (p.find_first_not_of("01") != std::string::npos)
                    out.push_back("cell " + label + ": pattern '" + p +
                                  "' has non-binary characters");
                if (!seen.insert(p).second)
                    out.push_back("basis " + std::string(1, label[0]) +
                                  ": pattern '" + p +
                                  "' appears in both cells or twice");
            }
        }
        if (table.num_shares >= 2 && table.num_shares < 63 &&
            total > (std::size_t{1} << table.num_shares))
            out.push_back("basis " + std::string(1, kCellKeys[b][0][0]) +
                          ": cells hold more patterns than the share space");
    }
    return out;
}

std::vector<int> pattern_bits(const std::string& pattern) {
    std::vector<int> bits;
    bits.reserve(pattern.size());
    for (char c : pattern) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("pattern has non-binary characters");
        bits.push_back(c - '0');
    }
    return bits;
}

int pattern_parity(const std::string& pattern) {
    int p = 0;
    for (char c : pattern) p ^= (c == '1');
    return p;
}

EncodingTable table_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("table JSON parse error: ") +
                                    e.what());
    }
    EncodingTable t;
    if (!j.is_object() || !j.contains("num_shares") || !j.contains("cells"))
        throw std::invalid_argument("table JSON needs num_shares and cells");
    t.name = j.value("name", "custom");
    t.num_shares = j.at("num_shares").get<int>();
    const auto& cells = j.at("cells");
    for (int b = 0; b < 2; ++b)
        for (int s = 0; s < 2; ++s) {
            const std::string key = kCellKeys[b][s];
            if (!cells.contains(key))
                throw std::invalid_argument("table JSON misses cell " + key);
            t.cells[b][s] = cells.at(key).get<std::vector<std::string>>();
        }
    return t;
}

std::string table_to_json(const EncodingTable& table) {
    nlohmann::ordered_json j;
    j["name"] = table.name;
    j["num_shares"] = table.num_shares;
    nlohmann::ordered_json cells;
    for (int b = 0; b < 2; ++b)
        for (int s = 0; s < 2; ++s)
            cells[kCellKeys[b][s]] = table.cells[b][s];
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

EncodingTable load_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open table file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return table_from_json(ss.str());
}

}  // namespace qss

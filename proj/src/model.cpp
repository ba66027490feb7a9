#include "reident/model.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace reident {

char gender_char(Gender g) { return static_cast<char>(g); }

std::optional<Gender> parse_gender(std::string_view token) {
    if (token.size() != 1) return std::nullopt;
    switch (std::toupper(static_cast<unsigned char>(token[0]))) {
        case 'M': return Gender::Male;
        case 'F': return Gender::Female;
        case 'U': return Gender::Unknown;
        default: return std::nullopt;
    }
}

std::string normalize_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

namespace {

bool icd9_shape(std::string_view code) {
    if (code.size() < 3 || code.size() > 5) return false;
    char first = static_cast<char>(std::toupper(static_cast<unsigned char>(code[0])));
    if (!std::isdigit(static_cast<unsigned char>(first)) && first != 'E' && first != 'V') {
        return false;
    }
    return std::all_of(code.begin() + 1, code.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

bool valid_icd9(std::string_view code) { return icd9_shape(code); }

bool valid_icd9_prefix3(std::string_view prefix) { return prefix.size() == 3 && icd9_shape(prefix); }

std::optional<Icd9Code> Icd9Code::make(std::string_view raw) {
    if (!icd9_shape(raw)) return std::nullopt;
    Icd9Code code;
    code.text.reserve(raw.size());
    for (char c : raw) code.text.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return code;
}

bool icd9_prefix_match(std::string_view code, std::string_view prefix) {
    if (prefix.size() < 3) throw std::invalid_argument("diagnosis prefix shorter than 3 characters");
    if (prefix.size() > code.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::toupper(static_cast<unsigned char>(code[i])) !=
            std::toupper(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

bool icd9_prefix_match(const Icd9Code& code, std::string_view prefix) {
    return icd9_prefix_match(code.text, prefix);
}

bool valid_hospital_code(std::string_view code) {
    if (code.empty()) return false;
    std::size_t digits = 0;
    while (digits < code.size() && std::isdigit(static_cast<unsigned char>(code[digits]))) ++digits;
    if (digits == 0) return false;
    if (digits == code.size()) return true;
    return digits == code.size() - 1 && std::isalpha(static_cast<unsigned char>(code.back()));
}

std::string canonical_hospital_code(std::string_view code) {
    std::string out(code);
    if (!out.empty() && std::isalpha(static_cast<unsigned char>(out.back()))) {
        out.back() = static_cast<char>(std::tolower(static_cast<unsigned char>(out.back())));
    }
    return out;
}

bool valid_zip5(std::string_view zip) {
    return zip.size() == 5 && std::all_of(zip.begin(), zip.end(), [](char c) {
               return std::isdigit(static_cast<unsigned char>(c));
           });
}

void CodeDictionary::insert(std::string code, std::string description) {
    auto [it, inserted] = entries_.emplace(std::move(code), std::move(description));
    if (!inserted) throw std::invalid_argument("duplicate dictionary code: " + it->first);
    reverse_[normalize_text(it->second)].insert(it->first);
}

std::optional<std::string> CodeDictionary::description(const std::string& code) const {
    auto it = entries_.find(code);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::set<std::string> CodeDictionary::codes_for_description(std::string_view text) const {
    auto it = reverse_.find(normalize_text(text));
    if (it == reverse_.end()) return {};
    return it->second;
}

IncidentMap default_incident_map() {
    return IncidentMap{
        {"motor_vehicle", {"E81", "E82"}},
        {"assault", {"E96"}},
    };
}

const std::vector<std::string>& observed_prefixes() {
    static const std::vector<std::string> prefixes = {
        "437", "444", "508", "518", "562", "569", "800", "801", "802", "803", "804",
        "805", "808", "818", "824", "827", "829", "861", "864", "873", "884", "900",
        "910", "920", "923", "942", "943", "944", "945", "946", "947", "959", "V58",
        "E81", "E82", "E88", "E89", "E92", "E95", "E96", "E97", "E98",
    };
    return prefixes;
}

std::set<std::string> incident_to_prefixes(const std::string& incident_type,
                                           const IncidentMap& mapping) {
    auto it = mapping.find(incident_type);
    if (it == mapping.end()) return {};
    return it->second;
}

std::set<std::string> resolve_hospital(std::string_view name, const CodeDictionary& dictionary,
                                       const HospitalGroups& groups) {
    auto direct = dictionary.codes_for_description(name);
    if (!direct.empty()) return direct;
    auto it = groups.find(normalize_text(name));
    if (it != groups.end()) return it->second;
    return {};
}

}  // namespace reident

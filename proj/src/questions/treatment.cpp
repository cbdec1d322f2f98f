#include "dalab/treatment.hpp"

#include <cctype>

#include "dalab/market.hpp"

namespace dalab {

std::string_view to_string(Treatment t) {
    switch (t) {
        case Treatment::TradDA: return "Trad-DA";
        case Treatment::MenuDA: return "Menu-DA";
        case Treatment::MenuSP: return "Menu-SP";
        case Treatment::TextbookSP: return "Textbook-SP";
        case Treatment::Null: return "Null";
    }
    return "?";
}

std::string_view slug(Treatment t) {
    switch (t) {
        case Treatment::TradDA: return "trad-da";
        case Treatment::MenuDA: return "menu-da";
        case Treatment::MenuSP: return "menu-sp";
        case Treatment::TextbookSP: return "textbook-sp";
        case Treatment::Null: return "null";
    }
    return "?";
}

Treatment treatment_from_string(std::string_view s) {
    std::string lower;
    for (char c : s) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (Treatment t : kTreatments)
        if (lower == slug(t)) return t;
    throw InvalidInput("unknown treatment '" + std::string(s) + "'");
}

bool is_mechanics(Treatment t) { return t == Treatment::TradDA || t == Treatment::MenuDA; }
bool is_property(Treatment t) { return t == Treatment::MenuSP || t == Treatment::TextbookSP; }

std::vector<std::string> flow_screen_ids(Treatment t) {
    std::vector<std::string> ids{"consent", "null-description", "null-training-1", "null-training-2"};
    const std::string s(slug(t));
    ids.push_back("description-" + s);
    for (int r = 1; r <= kTrainingRounds; ++r) ids.push_back("training-" + s + "-" + std::to_string(r));
    for (int r = 1; r <= kRealRounds; ++r) ids.push_back("real-" + std::to_string(r));
    for (int k = 1; k <= kSpuScreens; ++k) ids.push_back("spu-" + std::to_string(k));
    ids.push_back("exit");
    ids.push_back("end");
    return ids;
}

}  // namespace dalab

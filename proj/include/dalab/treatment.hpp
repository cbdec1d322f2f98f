#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace dalab {

enum class Treatment { TradDA, MenuDA, MenuSP, TextbookSP, Null };

inline constexpr std::array<Treatment, 5> kTreatments{Treatment::TradDA, Treatment::MenuDA, Treatment::MenuSP,
                                                      Treatment::TextbookSP, Treatment::Null};

/// "Trad-DA", "Menu-DA", "Menu-SP", "Textbook-SP", "Null".
std::string_view to_string(Treatment t);
/// "trad-da", ... ; used inside screen ids.
std::string_view slug(Treatment t);
/// Accepts either the display name or the slug, case-insensitively.
Treatment treatment_from_string(std::string_view s);

bool is_mechanics(Treatment t);  // Trad-DA, Menu-DA
bool is_property(Treatment t);   // Menu-SP, Textbook-SP

inline constexpr int kTrainingRounds = 3;
inline constexpr int kRealRounds = 10;
inline constexpr int kSpuScreens = 4;

/// Screen ids in presentation order:
///   consent, null-description, null-training-1, null-training-2,
///   description-<slug>, training-<slug>-1..3, real-1..10, spu-1..4, exit, end
std::vector<std::string> flow_screen_ids(Treatment t);

}  // namespace dalab

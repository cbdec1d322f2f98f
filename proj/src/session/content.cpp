#include "dalab/session.hpp"

namespace dalab {

namespace {

const std::vector<std::string> kSetting{
    "You take part in a matching game with three computerized participants: Ruth, Shirley and Theresa.",
    "There are four prizes, A, B, C and D. Each participant ends up with exactly one prize and no two "
    "participants get the same prize.",
    "Each prize is worth some money to you. The amounts change from round to round and are shown before you "
    "rank.",
    "Every participant submits a ranking of the four prizes. The computerized participants submit rankings that "
    "you never see.",
    "Each prize also has a priority order over the four participants. Priorities are shown to you each round.",
};

json make(std::string id, std::string title, std::vector<std::string> sections) {
    return {{"id", std::move(id)}, {"title", std::move(title)}, {"sections", std::move(sections)}};
}

json null_description() {
    auto s = kSetting;
    s.push_back("The prizes are handed out by a fixed procedure that takes all four rankings and all four priority "
                "orders as input.");
    return make("null-description", "How prizes are handed out", s);
}

std::vector<std::string> trad_da() {
    return {
        "Each participant starts by asking for the prize at the top of their ranking.",
        "A prize asked for by several participants holds on to the one with the highest priority for it and turns "
        "the others away.",
        "A participant who is turned away asks for the next prize on their ranking. A prize that is already holding "
        "someone compares the newcomer with the one it holds and keeps whoever has the higher priority.",
        "This continues until no participant is turned away. Each participant then receives the prize holding "
        "them.",
    };
}

std::vector<std::string> menu_da() {
    return {
        "Step 1 works out your Obtainable Prizes without looking at your ranking.",
        "Leave yourself out. Each prize offers itself to the computerized participant with the highest priority "
        "for it. A participant offered several prizes keeps the one they rank highest and sends the rest back.",
        "A prize that is sent back offers itself to the next computerized participant in its priority order. This "
        "continues until each computerized participant holds one prize. One prize is left unpaired.",
        "Your Obtainable Prizes are the unpaired prize and every prize for which your priority is higher than the "
        "priority of the participant holding it.",
        "Step 2: you receive the Obtainable Prize that your ranking puts highest.",
    };
}

std::vector<std::string> menu_sp() {
    return {
        "A set of Obtainable Prizes is worked out from the priorities and the computerized participants' "
        "rankings.",
        "Your own ranking has no influence on which prizes are Obtainable.",
        "You receive the Obtainable Prize that your ranking puts highest.",
    };
}

std::vector<std::string> textbook_sp() {
    return {
        "Whatever rankings the computerized participants submit and whatever the priorities are, putting the "
        "prizes in the order you really prefer them never gets you a prize you like less than the one some other "
        "ranking would get you.",
    };
}

}  // namespace

json content(std::string_view id) {
    if (id == "consent")
        return make("consent", "Welcome",
                    {"This study is about how people rank prizes. You earn money from the prizes you receive and "
                     "from points scored on questions.",
                     "Press continue to agree to take part."});
    if (id == "null-description") return null_description();
    if (id == "description-null") {
        json j = null_description();
        j["id"] = "description-null";
        return j;
    }
    auto with_setting = [](std::string cid, std::string title, std::vector<std::string> mech) {
        auto s = kSetting;
        s.insert(s.end(), mech.begin(), mech.end());
        json j = make(std::move(cid), std::move(title), s);
        j["mechanism"] = mech;
        return j;
    };
    if (id == "description-trad-da") return with_setting(std::string(id), "How prizes are handed out", trad_da());
    if (id == "description-menu-da") return with_setting(std::string(id), "How prizes are handed out", menu_da());
    if (id == "description-menu-sp") return with_setting(std::string(id), "How prizes are handed out", menu_sp());
    if (id == "description-textbook-sp")
        return with_setting(std::string(id), "How prizes are handed out", textbook_sp());
    return json();
}

}  // namespace dalab

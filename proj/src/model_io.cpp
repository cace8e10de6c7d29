#include "cemax/model_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cemax/errors.hpp"

namespace cemax {

namespace {

struct Token {
    std::string text;
    std::size_t column = 0;
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') {
            break;
        }
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') {
            ++i;
        }
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

bool is_identifier(const std::string& s) {
    if (s.empty() || s == "->" || s == ":") {
        return false;
    }
    for (char c : s) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '~' || c == '+' ||
                  c == '\'' || c == '@' || c == '$';
        if (!ok) {
            return false;
        }
    }
    return true;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Mdp run() {
        std::istringstream in{std::string(text_)};
        std::string line;
        while (std::getline(in, line)) {
            ++line_no_;
            auto tokens = tokenize(line);
            if (tokens.empty()) {
                continue;
            }
            handle(tokens);
        }
        return finish();
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(line_no_, t.column, msg); }
    [[noreturn]] void fail_eol(const std::string& msg) const { throw ParseError(line_no_, 1, msg); }

    Rational literal(const Token& t) const {
        if (t.text.find('.') != std::string::npos || t.text.find('e') != std::string::npos ||
            t.text.find('E') != std::string::npos) {
            fail(t, "decimal literal '" + t.text + "' not allowed; use an integer or a/b");
        }
        Rational q;
        if (!parse_rational(t.text, q)) {
            fail(t, "malformed number '" + t.text + "'");
        }
        return q;
    }

    void identifier(const Token& t) const {
        if (!is_identifier(t.text)) {
            fail(t, "malformed identifier '" + t.text + "'");
        }
    }

    void handle(const std::vector<Token>& tk) {
        const std::string& head = tk[0].text;
        if (!seen_header_) {
            if (head != "cmdp" || tk.size() != 2 || tk[1].text != "1") {
                fail(tk[0], "expected header 'cmdp 1'");
            }
            seen_header_ = true;
            return;
        }
        if (head == "states:") {
            if (have_states_) {
                fail(tk[0], "duplicate 'states:' declaration");
            }
            have_states_ = true;
            for (std::size_t i = 1; i < tk.size(); ++i) {
                identifier(tk[i]);
                if (!index_.emplace(tk[i].text, m_.size()).second) {
                    throw SemanticError("line " + std::to_string(line_no_) + ": duplicate state '" + tk[i].text + "'");
                }
                m_.add_state(tk[i].text);
            }
            return;
        }
        if (head == "init:" || head == "goal:" || head == "fail:") {
            if (tk.size() != 2) {
                fail(tk[0], "expected exactly one state after '" + head + "'");
            }
            identifier(tk[1]);
            auto& slot = singles_[head];
            if (slot.first) {
                fail(tk[0], "duplicate '" + head + "' declaration");
            }
            slot = {true, {tk[1].text, line_no_}};
            return;
        }
        if (head == "F:" || head == "G:") {
            auto& slot = sets_[head];
            if (slot.first) {
                fail(tk[0], "duplicate '" + head + "' declaration");
            }
            slot.first = true;
            for (std::size_t i = 1; i < tk.size(); ++i) {
                identifier(tk[i]);
                slot.second.emplace_back(tk[i].text, line_no_);
            }
            return;
        }
        if (head == "action") {
            if (tk.size() != 5 || tk[3].text != "reward") {
                fail(tk[0], "expected 'action <state> <label> reward <value>'");
            }
            identifier(tk[1]);
            identifier(tk[2]);
            PendingAction a;
            a.state = tk[1].text;
            a.label = tk[2].text;
            a.reward = literal(tk[4]);
            a.line = line_no_;
            pending_.push_back(std::move(a));
            return;
        }
        if (head == "->") {
            if (pending_.empty()) {
                fail(tk[0], "transition outside an action block");
            }
            if (tk.size() != 4 || tk[2].text != ":") {
                fail(tk[0], "expected '-> <state> : <probability>'");
            }
            identifier(tk[1]);
            pending_.back().dist.push_back({tk[1].text, literal(tk[3]), line_no_});
            return;
        }
        fail(tk[0], "unexpected token '" + head + "'");
    }

    int resolve(const std::string& name, std::size_t line) const {
        auto it = index_.find(name);
        if (it == index_.end()) {
            throw SemanticError("line " + std::to_string(line) + ": unknown state '" + name + "'");
        }
        return it->second;
    }

    Mdp finish() {
        if (!seen_header_) {
            throw ParseError(line_no_ + 1, 1, "missing header 'cmdp 1'");
        }
        if (!have_states_) {
            throw SemanticError("missing 'states:' declaration");
        }
        if (!singles_["init:"].first) {
            throw SemanticError("missing 'init:' declaration");
        }
        const auto& init = singles_["init:"].second;
        m_.init = resolve(init.first, init.second);
        for (const char* key : {"goal:", "fail:"}) {
            const auto& slot = singles_[key];
            if (slot.first) {
                int s = resolve(slot.second.first, slot.second.second);
                (std::string(key) == "goal:" ? m_.goal : m_.fail) = s;
            }
        }
        for (const char* key : {"F:", "G:"}) {
            const auto& slot = sets_[key];
            if (!slot.first || slot.second.empty()) {
                throw SemanticError(std::string("empty or missing '") + key + "' set");
            }
            auto& dst = std::string(key) == "F:" ? m_.f_set : m_.g_set;
            std::set<int> uniq;
            for (const auto& [name, line] : slot.second) {
                uniq.insert(resolve(name, line));
            }
            dst.assign(uniq.begin(), uniq.end());
        }
        for (auto& a : pending_) {
            int s = resolve(a.state, a.line);
            for (const auto& existing : m_.actions[s]) {
                if (existing.label == a.label) {
                    throw SemanticError("line " + std::to_string(a.line) + ": duplicate action '" + a.label +
                                        "' at state '" + a.state + "'");
                }
            }
            Action act;
            act.label = a.label;
            act.reward = a.reward;
            for (const auto& t : a.dist) {
                act.dist.push_back({resolve(t.target, t.line), t.prob});
            }
            m_.actions[s].push_back(std::move(act));
        }
        normalize_distributions(m_);
        auto problems = validate_mdp(m_, {.allow_negative_rewards = true});
        if (!problems.empty()) {
            throw SemanticError(problems.front());
        }
        return std::move(m_);
    }

    struct PendingTransition {
        std::string target;
        Rational prob;
        std::size_t line;
    };
    struct PendingAction {
        std::string state;
        std::string label;
        Rational reward;
        std::size_t line = 0;
        std::vector<PendingTransition> dist;
    };

    std::string_view text_;
    std::size_t line_no_ = 0;
    bool seen_header_ = false;
    bool have_states_ = false;
    Mdp m_;
    std::map<std::string, int> index_;
    std::map<std::string, std::pair<bool, std::pair<std::string, std::size_t>>> singles_;
    std::map<std::string, std::pair<bool, std::vector<std::pair<std::string, std::size_t>>>> sets_;
    std::vector<PendingAction> pending_;
};

std::string join_names(const Mdp& m, const std::vector<int>& states) {
    std::string out;
    for (int s : states) {
        out += " " + m.names[s];
    }
    return out;
}

}  // namespace

Mdp parse_model(std::string_view text) { return Parser(text).run(); }

Mdp load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open model file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string emit_model(const Mdp& m) {
    std::ostringstream out;
    out << "cmdp 1\n";
    std::vector<int> all(m.size());
    for (int s = 0; s < m.size(); ++s) {
        all[s] = s;
    }
    out << "states:" << join_names(m, all) << "\n";
    out << "init: " << m.names[m.init] << "\n";
    out << "F:" << join_names(m, m.f_set) << "\n";
    out << "G:" << join_names(m, m.g_set) << "\n";
    if (m.goal) {
        out << "goal: " << m.names[*m.goal] << "\n";
    }
    if (m.fail) {
        out << "fail: " << m.names[*m.fail] << "\n";
    }
    for (int s = 0; s < m.size(); ++s) {
        for (const auto& a : m.actions[s]) {
            out << "action " << m.names[s] << " " << a.label << " reward " << to_string(a.reward) << "\n";
            for (const auto& t : a.dist) {
                out << "  -> " << m.names[t.target] << " : " << to_string(t.prob) << "\n";
            }
        }
    }
    return out.str();
}

std::string export_result(const Mdp& m, const ResultSummary& result, const RewardBasedScheduler& sched) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["value"] = {{"num", result.value.get_num().get_str()}, {"den", result.value.get_den().get_str()}};
    j["saturation_point"] = result.saturation_point;
    ordered_json decisions = ordered_json::array();
    for (const auto& [key, action] : sched.table) {
        decisions.push_back({{"state", m.names[key.first]},
                             {"level", key.second},
                             {"action", m.actions[key.first][action].label}});
    }
    j["decisions"] = std::move(decisions);
    ordered_json tail = ordered_json::object();
    for (int s = 0; s < m.size() && s < static_cast<int>(sched.tail.size()); ++s) {
        if (sched.tail[s] >= 0) {
            tail[m.names[s]] = m.actions[s][sched.tail[s]].label;
        }
    }
    j["tail"] = std::move(tail);
    j["upper_bound"] = {{"num", result.upper_bound.get_num().get_str()},
                        {"den", result.upper_bound.get_den().get_str()}};
    j["threshold_calls"] = result.threshold_calls;
    return j.dump(2) + "\n";
}

}  // namespace cemax

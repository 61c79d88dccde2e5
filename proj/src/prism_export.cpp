#include "honeyroles/prism_export.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "honeyroles/rational.hpp"

namespace honeyroles {

int PathTable::total_paths() const {
    int total = 0;
    for (const auto& entry : entries) total += static_cast<int>(entry.paths.size());
    return total;
}

PathTable enumerate_path_table(const Topology& topo, const PathPolicy& policy) {
    PathTable table;
    const auto edges = topo.edge_switches();
    for (SwitchId src : edges) {
        for (SwitchId dst : edges) {
            PathTable::Entry entry;
            entry.src = src;
            entry.dst = dst;
            if (src == dst) {
                entry.paths.push_back(ForwardingPath{{src}});
            } else {
                entry.paths = enumerate_paths(topo, src, dst, policy);
            }
            table.entries.push_back(std::move(entry));
        }
    }
    return table;
}

namespace {

std::string two_decimals(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

struct Emitter {
    std::ostringstream out;
    int commands = 0;

    void line(const std::string& text = "") { out << text << "\n"; }
    void command(const std::string& text) {
        out << text << "\n";
        ++commands;
    }
};

}  // namespace

PrismModel emit_model(const SimConfig& cfg, const Topology& topo, const PathTable& table) {
    if (table.entries.empty()) throw WorldConfigError("emit_model: empty path table");
    for (const auto& entry : table.entries)
        if (entry.paths.empty())
            throw WorldConfigError("emit_model: no paths for pair " + std::to_string(entry.src) +
                                   "->" + std::to_string(entry.dst));

    // Host placement mirrors sample 0 of the simulator run.
    World world(cfg, derive_sample_seed(cfg.master_seed, 0));
    const int n_switches = topo.switch_count();

    // tag -> path, in table order
    std::vector<const ForwardingPath*> tagged;
    std::map<std::pair<SwitchId, SwitchId>, std::vector<int>> pair_tags;
    for (const auto& entry : table.entries) {
        for (const auto& path : entry.paths) {
            pair_tags[{entry.src, entry.dst}].push_back(3000 + static_cast<int>(tagged.size()));
            tagged.push_back(&path);
        }
    }
    const int max_tag = 3000 + static_cast<int>(tagged.size()) - 1;

    const int flow_ratio = static_cast<int>(std::lround(100.0 * (1.0 - cfg.honey_ratio)));
    const auto compromised = resolve_compromised(cfg, topo);

    Emitter em;
    em.line("dtmc");
    em.line();
    em.line("// role-based deception network model");
    em.line("// Defender selects connections, System tracks honey events and belief,");
    em.line("// Adversary attacks flows it believes are real.");
    em.line();
    em.line("const int maxIteration = " + std::to_string(cfg.round_length) + ";");
    em.line("const int flowRatio = " + std::to_string(flow_ratio) + "; // percent of real connections");
    for (int r = 0; r < cfg.roles; ++r)
        em.line("const int role" + std::to_string(r) + " = " + std::to_string(r) + ";");
    em.line("const int targetRole = " + std::to_string(cfg.target_role) + ";");
    em.line();

    em.line("// forwarding path tags");
    for (std::size_t i = 0; i < tagged.size(); ++i)
        em.line("const int pathNumber" + std::to_string(i) + " = " + std::to_string(3000 + i) + ";");
    em.line();

    // Defender variable declarations come before the formulas that mention
    // them, so emit the module header first.
    const int max_host = world.hosts.count() - 1;
    em.line("module Defender");
    em.line("  sched : [0..11] init 0;");
    em.line("  count : [0.." + std::to_string(cfg.round_length) + "] init 0;");
    em.line("  flowType : [0..2] init 0;");
    em.line("  roleType : [0.." + std::to_string(cfg.roles - 1) + "] init 0;");
    em.line("  sourceID : [0.." + std::to_string(max_host + 1) + "] init 0;");
    em.line("  sourceSW : [0.." + std::to_string(n_switches - 1) + "] init 0;");
    em.line("  destinationID : [0.." + std::to_string(max_host + 1) + "] init 0;");
    em.line("  destinationSW : [0.." + std::to_string(n_switches - 1) + "] init 0;");
    em.line("  currentPath : [0.." + std::to_string(max_tag) + "] init 0;");
    em.line();

    em.line("  //#type selection#");
    em.command("  [] sched=0 & flowType=0 -> flowRatio/100: (flowType'=1) & (sched'=1) + "
               "(100-flowRatio)/100: (flowType'=2) & (sched'=1);");

    em.line("  //#role type selection#");
    {
        std::string cmd = "  [] sched=1 -> ";
        for (int r = 0; r < cfg.roles; ++r) {
            if (r) cmd += " + ";
            cmd += "1/" + std::to_string(cfg.roles) + ": (roleType'=role" + std::to_string(r) +
                   ") & (sched'=2)";
        }
        em.command(cmd + ";");
    }

    em.line("  //#source selection#");
    for (int flow_type = 1; flow_type <= 2; ++flow_type) {
        const HostKind kind = flow_type == 1 ? HostKind::Real : HostKind::Honey;
        for (int r = 0; r < cfg.roles; ++r) {
            const auto& members = world.hosts.members(kind, r);
            if (members.empty())
                throw WorldConfigError("emit_model: role without members of both kinds");
            std::string cmd = "  [] sched=2 & sourceID=0 & count<maxIteration & flowType=" +
                              std::to_string(flow_type) + " & roleType=role" + std::to_string(r) +
                              " -> ";
            for (std::size_t i = 0; i < members.size(); ++i) {
                const Host& host = world.hosts.host(members[i]);
                if (i) cmd += " + ";
                cmd += "1/" + std::to_string(members.size()) + ": (sourceID'=" +
                       std::to_string(host.id + 1) + ") & (sourceSW'=" + std::to_string(host.edge) +
                       ") & (sched'=3)";
            }
            em.command(cmd + ";");
        }
    }

    em.line("  //#destination selection#");
    for (int r = 0; r < cfg.roles; ++r) {
        const auto& servers = world.roles[static_cast<std::size_t>(r)].servers;
        std::string cmd =
            "  [] sched=3 & destinationID=0 & roleType=role" + std::to_string(r) + " -> ";
        for (std::size_t i = 0; i < servers.size(); ++i) {
            const Host& host = world.hosts.host(servers[i]);
            if (i) cmd += " + ";
            cmd += "1/" + std::to_string(servers.size()) + ": (destinationID'=" +
                   std::to_string(host.id + 1) + ") & (destinationSW'=" + std::to_string(host.edge) +
                   ") & (sched'=4)";
        }
        em.command(cmd + ";");
    }

    em.line("  //## current path selection ##");
    for (const auto& [pair, tags] : pair_tags) {
        std::string cmd = "  [] sched=4 & sourceID!=0 & destinationID!=0 & sourceSW=" +
                          std::to_string(pair.first) + " & destinationSW=" +
                          std::to_string(pair.second) + " -> ";
        for (std::size_t i = 0; i < tags.size(); ++i) {
            if (i) cmd += " + ";
            cmd += (tags.size() == 1 ? std::string("1") : "1/" + std::to_string(tags.size())) +
                   ": (currentPath'=pathNumber" + std::to_string(tags[i] - 3000) + ") & (sched'=5)";
        }
        em.command(cmd + ";");
    }

    em.line("  // next connection / next round");
    em.command("  [nextConnection] sched=11 & count<maxIteration -> (sched'=0) & (flowType'=0) & "
               "(sourceID'=0) & (destinationID'=0) & (currentPath'=0) & (count'=count+1);");
    em.command("  [newRound] sched=11 & count=maxIteration -> (sched'=0) & (flowType'=0) & "
               "(sourceID'=0) & (destinationID'=0) & (currentPath'=0) & (count'=0);");
    em.line("endmodule");
    em.line();

    em.line("// path membership formulas, one distinct tag per enumerated path");
    for (std::size_t i = 0; i < tagged.size(); ++i)
        em.line("formula path" + std::to_string(3000 + i) + " = (currentPath=" +
                std::to_string(3000 + i) + ");");
    em.line();

    {
        std::string compromised_formula;
        for (std::size_t i = 0; i < tagged.size(); ++i) {
            bool crossed = false;
            for (SwitchId sw : compromised)
                if (tagged[i]->contains(sw)) crossed = true;
            if (!crossed) continue;
            if (!compromised_formula.empty()) compromised_formula += " | ";
            compromised_formula += "path" + std::to_string(3000 + i);
        }
        if (compromised_formula.empty()) compromised_formula = "false";
        em.line("formula compromisedPath = " + compromised_formula + ";");
    }
    em.line("formula active_attacker = compromisedPath & (roleType=targetRole);");
    em.line("formula active_defender = (sched>=5);");
    em.line("formula roundFinished = (count=maxIteration);");
    em.line("formula attackerRoundComplete = (count=maxIteration);");
    em.line();

    const auto each_switch = [&](const std::string& pattern) {
        std::string joined;
        for (SwitchId sw = 0; sw < n_switches; ++sw) {
            if (sw) joined += " & ";
            std::string expanded = pattern;
            std::string::size_type pos;
            while ((pos = expanded.find('@')) != std::string::npos)
                expanded.replace(pos, 1, std::to_string(sw));
            joined += expanded;
        }
        return joined;
    };

    em.line("module Adversary");
    em.line("  attacker : [0..7] init 0;");
    em.line("  confidence: int init " + std::to_string(cfg.confidence_init) + ";");
    em.line("  beliefObservation : bool init false;");
    em.line("  attack : bool init false;");
    em.line("  attackFlow : [0..3] init 0;");
    em.line();
    em.command("  [startAttacker] attacker=0 & active_attacker=true & sched=5 -> (attacker'=1);");
    em.command("  [] attacker=1 & active_attacker=true & targetRole=roleType -> "
               "(confidence/100): (beliefObservation'=true) & (attacker'=2)"
               " + (1-confidence/100): (beliefObservation'=false) & (attacker'=2);");
    em.command("  [] attacker=2 & active_attacker=true & beliefObservation=true & flowType=1 -> "
               "(attack'=true) & (attacker'=3);");
    em.command("  [] attacker=2 & active_attacker=true & beliefObservation=false & flowType=2 -> "
               "(attack'=true) & (attacker'=3);");
    em.command("  [] attacker=2 & active_attacker=true & beliefObservation=false & flowType=1 -> "
               "(attack'=false) & (attacker'=3);");
    em.command("  [] attacker=2 & active_attacker=true & beliefObservation=true & flowType=2 -> "
               "(attack'=false) & (attacker'=3);");
    em.command("  [] attacker=3 & attack=true -> (attackFlow'=2) & (attacker'=6);");
    em.command("  [] attacker=3 & attack=false -> (attackFlow'=1) & (attacker'=6);");
    em.command("  [] attacker=6 & attackerRoundComplete=true & confidence<" +
               std::to_string(cfg.confidence_cap) +
               " -> 2/3: (confidence'=confidence+1) & (attacker'=7)"
               " + 1/3: (confidence'=confidence-1) & (attacker'=7);");
    em.command("  [] attacker=6 & attackerRoundComplete=true & confidence>=" +
               std::to_string(cfg.confidence_cap) +
               " -> 1/2: (attacker'=7) + 1/2: (confidence'=confidence-1) & (attacker'=7);");
    em.command("  [beliefUpdateAttacker] (attacker=7|attacker=6) & attackFlow!=0 & "
               "active_defender=true & active_attacker=false -> (attacker'=0);");
    em.line("endmodule");
    em.line();

    em.line("module System");
    em.line("  received_size : [0..1] init 0;");
    for (SwitchId sw = 0; sw < n_switches; ++sw)
        em.line("  ae_sw" + std::to_string(sw) + " : [0..100000] init 1;");
    for (SwitchId sw = 0; sw < n_switches; ++sw)
        em.line("  count_sw" + std::to_string(sw) + " : [0..100000] init 1;");
    for (SwitchId sw = 0; sw < n_switches; ++sw)
        em.line("  bi_sw" + std::to_string(sw) + " : [0..100] init 0;");
    em.line();

    em.line("  // #record honey events#");
    em.command("  [beliefUpdateAttacker] sched=5 & active_defender=true & (attackFlow=2|attackFlow=3)"
               " & (flowType=2) -> (sched'=6) & (received_size'=0);");
    em.command("  [] sched=5 & attackFlow=1 & flowType=2 -> (sched'=8);");
    em.command("  [] sched=5 & (flowType=1 | attackFlow=0) -> (sched'=9);");
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        std::string cmd = "  [] sched=6 & path" + std::to_string(3000 + i) + " -> ";
        const auto& seq = tagged[i]->switch_sequence;
        for (std::size_t k = 0; k < seq.size(); ++k) {
            if (k) cmd += " & ";
            cmd += "(ae_sw" + std::to_string(seq[k]) + "'=ae_sw" + std::to_string(seq[k]) + "+1)";
        }
        em.command(cmd + " & (sched'=8);");
    }
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        std::string cmd = "  [] (flowType=2) & sched=8 & path" + std::to_string(3000 + i) + " -> ";
        const auto& seq = tagged[i]->switch_sequence;
        for (std::size_t k = 0; k < seq.size(); ++k) {
            if (k) cmd += " & ";
            cmd += "(count_sw" + std::to_string(seq[k]) + "'=count_sw" + std::to_string(seq[k]) +
                   "+1)";
        }
        em.command(cmd + " & (sched'=9);");
    }
    em.line();

    em.line("  // #update belief#");
    em.command("  [] sched=9 & roundFinished=true -> " +
               each_switch("(bi_sw@'=round((((bi_sw@/100)*" + two_decimals(1.0 - cfg.beta) +
                           ") + ((ae_sw@/(count_sw@))*" + two_decimals(cfg.beta) + "))*100))") +
               " & (sched'=10);");
    em.command("  [] sched=9 & roundFinished=false -> (sched'=11);");
    em.command("  [] sched=10 & roundFinished=true -> " +
               each_switch("(count_sw@'=1) & (ae_sw@'=1)") + " & (sched'=11);");
    em.line("endmodule");
    em.line();

    PrismModel model;
    model.text = em.out.str();
    model.command_count = em.commands;
    model.module_names = {"Defender", "System", "Adversary"};
    return model;
}

// ---------------------------------------------------------------------------
// structural checker

namespace {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    Rational number;
    int line = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip();
        Token tok;
        tok.line = line_;
        if (pos_ >= text_.size()) return tok;
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_'))
                ++pos_;
            tok.kind = Token::Ident;
            tok.text = text_.substr(start, pos_ - start);
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::int64_t whole = std::stoll(text_.substr(start, pos_ - start));
            Rational value(whole);
            if (pos_ < text_.size() && text_[pos_] == '.') {
                ++pos_;
                std::int64_t frac = 0, scale = 1;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    frac = frac * 10 + (text_[pos_] - '0');
                    scale *= 10;
                    ++pos_;
                }
                value = value + Rational(frac, scale);
            }
            tok.kind = Token::Number;
            tok.number = value;
            tok.text = text_.substr(start, pos_ - start);
            return tok;
        }
        // multi-char operators we care about
        static const char* two_char[] = {"->", "<=", ">=", "!=", ".."};
        for (const char* op : two_char) {
            if (text_.compare(pos_, 2, op) == 0) {
                tok.kind = Token::Punct;
                tok.text = op;
                pos_ += 2;
                return tok;
            }
        }
        tok.kind = Token::Punct;
        tok.text = std::string(1, c);
        ++pos_;
        return tok;
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            if (text_[pos_] == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_.compare(pos_, 2, "//") == 0) {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

const std::set<std::string> kKeywords = {"dtmc",   "const", "int",  "bool",   "formula",
                                         "module", "endmodule", "init", "true", "false",
                                         "round",  "min",   "max",  "floor",  "ceil"};

struct CheckerState {
    std::set<std::string> declared;
    std::map<std::string, Rational> const_values;
    std::vector<PrismViolation>* violations;

    void check_ident(const Token& tok) {
        if (kKeywords.count(tok.text) || declared.count(tok.text)) return;
        violations->push_back({tok.line, "identifier '" + tok.text + "' referenced before declaration"});
        declared.insert(tok.text);  // report each unknown once
    }
};

// Linear rational form c0 + sum(ci * var_i); enough for every probability
// expression the emitter produces.
struct LinForm {
    Rational constant{0};
    std::map<std::string, Rational> coeffs;

    bool is_constant() const { return coeffs.empty(); }
};

struct ProbParseError {
    std::string message;
};

class ProbParser {
public:
    ProbParser(const std::vector<Token>& tokens, CheckerState& state)
        : tokens_(tokens), state_(state) {}

    LinForm parse() {
        LinForm result = expr();
        if (pos_ != tokens_.size()) throw ProbParseError{"trailing tokens in probability"};
        return result;
    }

private:
    const Token& peek() const {
        static Token end;
        return pos_ < tokens_.size() ? tokens_[pos_] : end;
    }
    Token take() { return tokens_[pos_++]; }
    bool accept(const std::string& punct) {
        if (peek().kind == Token::Punct && peek().text == punct) {
            ++pos_;
            return true;
        }
        return false;
    }

    LinForm expr() {
        LinForm left = term();
        for (;;) {
            if (accept("+")) {
                LinForm right = term();
                left.constant = left.constant + right.constant;
                for (const auto& [name, coeff] : right.coeffs) {
                    auto [it, inserted] = left.coeffs.emplace(name, coeff);
                    if (!inserted) it->second = it->second + coeff;
                    if (it->second.num == 0) left.coeffs.erase(it);
                }
            } else if (accept("-")) {
                LinForm right = term();
                left.constant = left.constant - right.constant;
                for (const auto& [name, coeff] : right.coeffs) {
                    auto [it, inserted] = left.coeffs.emplace(name, Rational(0) - coeff);
                    if (!inserted) it->second = it->second - coeff;
                    if (it->second.num == 0) left.coeffs.erase(it);
                }
            } else {
                return left;
            }
        }
    }

    LinForm term() {
        LinForm left = factor();
        for (;;) {
            if (accept("*")) {
                LinForm right = factor();
                left = multiply(left, right);
            } else if (accept("/")) {
                LinForm right = factor();
                if (!right.is_constant() || right.constant.num == 0)
                    throw ProbParseError{"division by a non-constant"};
                left.constant = left.constant / right.constant;
                for (auto& [name, coeff] : left.coeffs) coeff = coeff / right.constant;
            } else {
                return left;
            }
        }
    }

    static LinForm multiply(const LinForm& a, const LinForm& b) {
        if (a.is_constant()) {
            LinForm out = b;
            out.constant = out.constant * a.constant;
            for (auto& [name, coeff] : out.coeffs) coeff = coeff * a.constant;
            return out;
        }
        if (b.is_constant()) return multiply(b, a);
        throw ProbParseError{"non-linear probability expression"};
    }

    LinForm factor() {
        if (accept("(")) {
            LinForm inner = expr();
            if (!accept(")")) throw ProbParseError{"missing ')'"};
            return inner;
        }
        if (accept("-")) {
            LinForm inner = factor();
            inner.constant = Rational(0) - inner.constant;
            for (auto& [name, coeff] : inner.coeffs) coeff = Rational(0) - coeff;
            return inner;
        }
        if (peek().kind == Token::Number) {
            LinForm out;
            out.constant = take().number;
            return out;
        }
        if (peek().kind == Token::Ident) {
            Token tok = take();
            state_.check_ident(tok);
            const auto it = state_.const_values.find(tok.text);
            LinForm out;
            if (it != state_.const_values.end()) {
                out.constant = it->second;
            } else {
                out.coeffs[tok.text] = Rational(1);
            }
            return out;
        }
        throw ProbParseError{"unexpected token in probability"};
    }

    const std::vector<Token>& tokens_;
    CheckerState& state_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<PrismViolation> check_model(const PrismModel& model) {
    std::vector<PrismViolation> violations;
    CheckerState state;
    state.violations = &violations;

    Lexer lexer(model.text);
    std::vector<Token> tokens;
    for (;;) {
        Token tok = lexer.next();
        if (tok.kind == Token::End) break;
        tokens.push_back(tok);
    }

    std::set<std::string> modules_seen;
    std::set<Rational, bool (*)(const Rational&, const Rational&)> path_tag_values(
        [](const Rational& a, const Rational& b) {
            return a.num * b.den < b.num * a.den;
        });

    std::size_t i = 0;
    const auto at_end = [&] { return i >= tokens.size(); };
    const auto skip_to_semicolon = [&] {
        while (!at_end() && !(tokens[i].kind == Token::Punct && tokens[i].text == ";")) ++i;
        if (!at_end()) ++i;
    };

    while (!at_end()) {
        const Token& tok = tokens[i];

        if (tok.kind == Token::Ident && tok.text == "dtmc") {
            ++i;
            continue;
        }

        if (tok.kind == Token::Ident && tok.text == "const") {
            // const int NAME = value ;
            ++i;
            if (!at_end() && tokens[i].kind == Token::Ident && tokens[i].text == "int") ++i;
            if (at_end() || tokens[i].kind != Token::Ident) {
                violations.push_back({tok.line, "malformed const declaration"});
                skip_to_semicolon();
                continue;
            }
            const std::string name = tokens[i].text;
            const int line = tokens[i].line;
            ++i;
            if (state.declared.count(name))
                violations.push_back({line, "duplicate declaration of '" + name + "'"});
            state.declared.insert(name);
            Rational value(0);
            bool have_value = false;
            if (!at_end() && tokens[i].kind == Token::Punct && tokens[i].text == "=") {
                ++i;
                if (!at_end() && tokens[i].kind == Token::Number) {
                    value = tokens[i].number;
                    have_value = true;
                    ++i;
                }
            }
            if (have_value) {
                state.const_values[name] = value;
                if (name.rfind("pathNumber", 0) == 0) {
                    if (!path_tag_values.insert(value).second)
                        violations.push_back({line, "duplicate path tag value " + value.str()});
                }
            }
            skip_to_semicolon();
            continue;
        }

        if (tok.kind == Token::Ident && tok.text == "formula") {
            ++i;
            if (at_end() || tokens[i].kind != Token::Ident) {
                violations.push_back({tok.line, "malformed formula declaration"});
                skip_to_semicolon();
                continue;
            }
            const std::string name = tokens[i].text;
            if (state.declared.count(name))
                violations.push_back({tokens[i].line, "duplicate declaration of '" + name + "'"});
            ++i;
            if (!at_end() && tokens[i].kind == Token::Punct && tokens[i].text == "=") ++i;
            // identifiers in the body must already be known; the formula's own
            // name becomes visible afterwards
            while (!at_end() && !(tokens[i].kind == Token::Punct && tokens[i].text == ";")) {
                if (tokens[i].kind == Token::Ident) state.check_ident(tokens[i]);
                ++i;
            }
            if (!at_end()) ++i;
            state.declared.insert(name);
            continue;
        }

        if (tok.kind == Token::Ident && tok.text == "module") {
            ++i;
            if (at_end() || tokens[i].kind != Token::Ident) {
                violations.push_back({tok.line, "module without a name"});
                continue;
            }
            if (!modules_seen.insert(tokens[i].text).second)
                violations.push_back({tokens[i].line, "duplicate module '" + tokens[i].text + "'"});
            ++i;
            continue;
        }

        if (tok.kind == Token::Ident && tok.text == "endmodule") {
            ++i;
            continue;
        }

        // variable declaration: NAME : range/type init VALUE ;
        if (tok.kind == Token::Ident) {
            const std::string name = tok.text;
            if (i + 1 < tokens.size() && tokens[i + 1].kind == Token::Punct &&
                tokens[i + 1].text == ":") {
                if (state.declared.count(name))
                    violations.push_back({tok.line, "duplicate declaration of '" + name + "'"});
                state.declared.insert(name);
                skip_to_semicolon();
                continue;
            }
            violations.push_back({tok.line, "unexpected token '" + name + "'"});
            ++i;
            continue;
        }

        // guarded command: [label?] guard -> p1 : u1 + ... ;
        if (tok.kind == Token::Punct && tok.text == "[") {
            const int cmd_line = tok.line;
            ++i;
            if (!at_end() && tokens[i].kind == Token::Ident) ++i;  // sync label
            if (at_end() || tokens[i].text != "]") {
                violations.push_back({cmd_line, "malformed command label"});
                skip_to_semicolon();
                continue;
            }
            ++i;

            // guard tokens until ->
            while (!at_end() && !(tokens[i].kind == Token::Punct && tokens[i].text == "->")) {
                if (tokens[i].kind == Token::Ident) state.check_ident(tokens[i]);
                ++i;
            }
            if (at_end()) {
                violations.push_back({cmd_line, "command without '->'"});
                break;
            }
            ++i;  // ->

            // collect update tokens until ';', splitting on top-level '+'
            std::vector<std::vector<Token>> branches(1);
            int depth = 0;
            while (!at_end() && !(tokens[i].kind == Token::Punct && tokens[i].text == ";")) {
                const Token& t = tokens[i];
                if (t.kind == Token::Punct && t.text == "(") ++depth;
                if (t.kind == Token::Punct && t.text == ")") --depth;
                if (t.kind == Token::Punct && t.text == "+" && depth == 0) {
                    branches.emplace_back();
                } else {
                    branches.back().push_back(t);
                }
                ++i;
            }
            if (!at_end()) ++i;  // ;

            Rational sum(0);
            std::map<std::string, Rational> symbolic_sum;
            bool sum_ok = true;
            for (const auto& branch : branches) {
                // probability = tokens before the first top-level ':'
                std::vector<Token> prob_tokens;
                std::size_t k = 0;
                int d = 0;
                bool has_prob = false;
                for (; k < branch.size(); ++k) {
                    const Token& t = branch[k];
                    if (t.kind == Token::Punct && t.text == "(") ++d;
                    if (t.kind == Token::Punct && t.text == ")") --d;
                    if (t.kind == Token::Punct && t.text == ":" && d == 0) {
                        has_prob = true;
                        break;
                    }
                }
                if (has_prob) {
                    prob_tokens.assign(branch.begin(), branch.begin() + static_cast<long>(k));
                    // identifiers in the update part still need declarations
                    for (std::size_t u = k + 1; u < branch.size(); ++u)
                        if (branch[u].kind == Token::Ident) state.check_ident(branch[u]);
                } else {
                    // implicit probability 1
                    for (const Token& t : branch)
                        if (t.kind == Token::Ident) state.check_ident(t);
                }

                if (!has_prob) {
                    sum = sum + Rational(1);
                    continue;
                }
                try {
                    ProbParser parser(prob_tokens, state);
                    LinForm form = parser.parse();
                    sum = sum + form.constant;
                    for (const auto& [name, coeff] : form.coeffs) {
                        auto [it, inserted] = symbolic_sum.emplace(name, coeff);
                        if (!inserted) it->second = it->second + coeff;
                        if (it->second.num == 0) symbolic_sum.erase(it);
                    }
                } catch (const ProbParseError& err) {
                    violations.push_back({cmd_line, err.message});
                    sum_ok = false;
                }
            }
            if (sum_ok && (!symbolic_sum.empty() || !(sum == Rational(1)))) {
                violations.push_back(
                    {cmd_line, "update weights sum to " + sum.str() +
                                   (symbolic_sum.empty() ? "" : " plus unresolved terms") +
                                   ", expected 1"});
            }
            continue;
        }

        violations.push_back({tok.line, "unexpected token '" + tok.text + "'"});
        ++i;
    }

    for (const std::string required : {"Defender", "System", "Adversary"})
        if (!modules_seen.count(required))
            violations.push_back({0, "missing module '" + required + "'"});

    return violations;
}

}  // namespace honeyroles

#include "honeyroles/topology.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace honeyroles {

const char* tier_name(SwitchTier tier) {
    switch (tier) {
        case SwitchTier::Edge: return "edge";
        case SwitchTier::Aggregate: return "aggregate";
        case SwitchTier::Core: return "core";
    }
    return "?";
}

bool ForwardingPath::contains(SwitchId sw) const {
    return std::find(switch_sequence.begin(), switch_sequence.end(), sw) != switch_sequence.end();
}

SwitchId Topology::add_switch(SwitchTier tier) {
    tiers_.push_back(tier);
    adjacency_.emplace_back();
    return static_cast<SwitchId>(tiers_.size() - 1);
}

void Topology::add_link(SwitchId a, SwitchId b) {
    if (a == b) throw std::invalid_argument("Topology::add_link: self-link");
    if (a < 0 || b < 0 || a >= switch_count() || b >= switch_count())
        throw std::out_of_range("Topology::add_link: unknown switch");
    if (has_link(a, b)) return;
    adjacency_[static_cast<std::size_t>(a)].push_back(b);
    adjacency_[static_cast<std::size_t>(b)].push_back(a);
    ++link_count_;
}

void Topology::attach_host(HostId host, SwitchId sw) {
    if (tier(sw) != SwitchTier::Edge)
        throw std::invalid_argument("Topology::attach_host: hosts attach to edge switches only");
    attachments_[host] = sw;
}

bool Topology::has_link(SwitchId a, SwitchId b) const {
    const auto& adj = adjacency_.at(static_cast<std::size_t>(a));
    return std::find(adj.begin(), adj.end(), b) != adj.end();
}

std::vector<SwitchId> Topology::edge_switches() const {
    std::vector<SwitchId> out;
    for (SwitchId sw = 0; sw < switch_count(); ++sw)
        if (tier(sw) == SwitchTier::Edge) out.push_back(sw);
    return out;
}

bool Topology::connected() const {
    if (switch_count() == 0) return true;
    std::vector<bool> seen(static_cast<std::size_t>(switch_count()), false);
    std::deque<SwitchId> frontier{0};
    seen[0] = true;
    int visited = 0;
    while (!frontier.empty()) {
        const SwitchId sw = frontier.front();
        frontier.pop_front();
        ++visited;
        for (SwitchId next : neighbors(sw)) {
            if (!seen[static_cast<std::size_t>(next)]) {
                seen[static_cast<std::size_t>(next)] = true;
                frontier.push_back(next);
            }
        }
    }
    return visited == switch_count();
}

Topology build_fat_tree(int pods, int edge_per_pod, int agg_per_pod, int cores) {
    if (pods < 1 || edge_per_pod < 1 || agg_per_pod < 1 || cores < 1)
        throw std::invalid_argument("build_fat_tree: all parameters must be >= 1");

    Topology topo;
    for (int i = 0; i < pods * edge_per_pod; ++i) topo.add_switch(SwitchTier::Edge);
    for (int i = 0; i < pods * agg_per_pod; ++i) topo.add_switch(SwitchTier::Aggregate);
    for (int i = 0; i < cores; ++i) topo.add_switch(SwitchTier::Core);

    const auto edge_id = [&](int pod, int e) { return static_cast<SwitchId>(pod * edge_per_pod + e); };
    const auto agg_id = [&](int pod, int a) {
        return static_cast<SwitchId>(pods * edge_per_pod + pod * agg_per_pod + a);
    };
    const auto core_id = [&](int c) {
        return static_cast<SwitchId>(pods * (edge_per_pod + agg_per_pod) + c);
    };

    for (int pod = 0; pod < pods; ++pod)
        for (int e = 0; e < edge_per_pod; ++e)
            for (int a = 0; a < agg_per_pod; ++a) topo.add_link(edge_id(pod, e), agg_id(pod, a));

    // Core c homes on aggregate stripe c % agg_per_pod of every pod.
    for (int c = 0; c < cores; ++c)
        for (int pod = 0; pod < pods; ++pod) topo.add_link(core_id(c), agg_id(pod, c % agg_per_pod));

    return topo;
}

Topology paper14_preset() { return build_fat_tree(4, 2, 1, 2); }

std::optional<Topology> topology_preset(const std::string& name) {
    if (name == "paper-14" || name == "paper14") return paper14_preset();
    return std::nullopt;
}

namespace {

struct GmlToken {
    enum Kind { Key, Integer, Real, String, Open, Close, End } kind = End;
    std::string text;
    long long int_value = 0;
    int line = 0;
};

class GmlLexer {
public:
    explicit GmlLexer(const std::string& text) : text_(text) {}

    GmlToken next() {
        skip_space();
        GmlToken tok;
        tok.line = line_;
        if (pos_ >= text_.size()) return tok;
        const char c = text_[pos_];
        if (c == '[') {
            ++pos_;
            tok.kind = GmlToken::Open;
            return tok;
        }
        if (c == ']') {
            ++pos_;
            tok.kind = GmlToken::Close;
            return tok;
        }
        if (c == '"') {
            ++pos_;
            std::string value;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\n') ++line_;
                value += text_[pos_++];
            }
            if (pos_ >= text_.size()) throw GmlError(tok.line, "unterminated string");
            ++pos_;
            tok.kind = GmlToken::String;
            tok.text = value;
            return tok;
        }
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            ++pos_;
            bool real = false;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                    text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == '-' || text_[pos_] == '+')) {
                if (!std::isdigit(static_cast<unsigned char>(text_[pos_]))) real = true;
                ++pos_;
            }
            tok.text = text_.substr(start, pos_ - start);
            if (real) {
                tok.kind = GmlToken::Real;
            } else {
                tok.kind = GmlToken::Integer;
                tok.int_value = std::stoll(tok.text);
            }
            return tok;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_' || text_[pos_] == '.')) {
                ++pos_;
            }
            tok.kind = GmlToken::Key;
            tok.text = text_.substr(start, pos_ - start);
            return tok;
        }
        throw GmlError(line_, std::string("unexpected character '") + c + "'");
    }

private:
    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {  // comment to end of line
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

std::optional<SwitchTier> parse_tier(std::string value) {
    std::transform(value.begin(), value.end(), value.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (value == "edge") return SwitchTier::Edge;
    if (value == "aggregate" || value == "agg") return SwitchTier::Aggregate;
    if (value == "core") return SwitchTier::Core;
    return std::nullopt;
}

}  // namespace

Topology load_gml(const std::string& text) {
    GmlLexer lexer(text);

    struct NodeRec {
        long long id;
        SwitchTier tier;
    };
    std::vector<NodeRec> nodes;
    std::vector<std::pair<long long, long long>> edges;
    std::vector<int> edge_lines;

    // Consumes a [ ... ] block whose contents we do not care about.
    const auto skip_block = [&](auto&& self) -> void {
        for (;;) {
            GmlToken tok = lexer.next();
            if (tok.kind == GmlToken::End) throw GmlError(tok.line, "unterminated block");
            if (tok.kind == GmlToken::Close) return;
            if (tok.kind == GmlToken::Open) self(self);
        }
    };

    GmlToken tok = lexer.next();
    if (tok.kind != GmlToken::Key || tok.text != "graph")
        throw GmlError(tok.line, "expected top-level 'graph' block");
    tok = lexer.next();
    if (tok.kind != GmlToken::Open) throw GmlError(tok.line, "expected '[' after 'graph'");

    for (;;) {
        tok = lexer.next();
        if (tok.kind == GmlToken::Close) break;
        if (tok.kind == GmlToken::End) throw GmlError(tok.line, "unterminated graph block");
        if (tok.kind != GmlToken::Key) throw GmlError(tok.line, "expected attribute key");

        const std::string key = tok.text;
        GmlToken value = lexer.next();
        if (key == "node" || key == "edge") {
            if (value.kind != GmlToken::Open)
                throw GmlError(value.line, "expected '[' after '" + key + "'");
            std::optional<long long> id, source, target;
            SwitchTier tier = SwitchTier::Edge;
            const int block_line = value.line;
            for (;;) {
                GmlToken attr = lexer.next();
                if (attr.kind == GmlToken::Close) break;
                if (attr.kind == GmlToken::End) throw GmlError(attr.line, "unterminated block");
                if (attr.kind != GmlToken::Key) throw GmlError(attr.line, "expected attribute key");
                GmlToken av = lexer.next();
                if (av.kind == GmlToken::Open) {
                    skip_block(skip_block);  // nested attribute block (e.g. graphics)
                    continue;
                }
                if (attr.text == "id" && av.kind == GmlToken::Integer) id = av.int_value;
                else if (attr.text == "source" && av.kind == GmlToken::Integer) source = av.int_value;
                else if (attr.text == "target" && av.kind == GmlToken::Integer) target = av.int_value;
                else if (attr.text == "tier" && av.kind == GmlToken::String) {
                    auto parsed = parse_tier(av.text);
                    if (!parsed) throw GmlError(av.line, "unknown tier '" + av.text + "'");
                    tier = *parsed;
                }
                // all other scalar attributes (label, graphics scalars, ...) are ignored
            }
            if (key == "node") {
                if (!id) throw GmlError(block_line, "node block without id");
                nodes.push_back({*id, tier});
            } else {
                if (!source || !target) throw GmlError(block_line, "edge block without source/target");
                edges.emplace_back(*source, *target);
                edge_lines.push_back(block_line);
            }
        } else if (value.kind == GmlToken::Open) {
            skip_block(skip_block);
        } else if (value.kind == GmlToken::End) {
            throw GmlError(value.line, "missing value for key '" + key + "'");
        }
        // scalar graph attributes (directed, label, ...) are ignored
    }

    Topology topo;
    std::unordered_map<long long, SwitchId> dense;
    for (const auto& node : nodes) {
        if (dense.count(node.id)) throw GmlError(1, "duplicate node id " + std::to_string(node.id));
        dense[node.id] = topo.add_switch(node.tier);
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto [s, t] = edges[i];
        const auto si = dense.find(s);
        const auto ti = dense.find(t);
        if (si == dense.end() || ti == dense.end())
            throw GmlError(edge_lines[i], "edge references unknown node");
        if (si->second == ti->second) throw GmlError(edge_lines[i], "self-loop");
        topo.add_link(si->second, ti->second);
    }
    return topo;
}

namespace {

// BFS hop distance; -1 when unreachable.
int shortest_hops(const Topology& topo, SwitchId src, SwitchId dst) {
    std::vector<int> dist(static_cast<std::size_t>(topo.switch_count()), -1);
    std::deque<SwitchId> frontier{src};
    dist[static_cast<std::size_t>(src)] = 0;
    while (!frontier.empty()) {
        const SwitchId sw = frontier.front();
        frontier.pop_front();
        if (sw == dst) return dist[static_cast<std::size_t>(sw)];
        for (SwitchId next : topo.neighbors(sw)) {
            if (dist[static_cast<std::size_t>(next)] < 0) {
                dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(sw)] + 1;
                frontier.push_back(next);
            }
        }
    }
    return -1;
}

void collect_simple_paths(const Topology& topo, SwitchId current, SwitchId dst, int budget,
                          std::vector<SwitchId>& stack, std::vector<bool>& on_stack,
                          std::vector<ForwardingPath>& out) {
    if (current == dst) {
        out.push_back(ForwardingPath{stack});
        return;
    }
    if (budget == 0) return;
    for (SwitchId next : topo.neighbors(current)) {
        if (on_stack[static_cast<std::size_t>(next)]) continue;
        stack.push_back(next);
        on_stack[static_cast<std::size_t>(next)] = true;
        collect_simple_paths(topo, next, dst, budget - 1, stack, on_stack, out);
        on_stack[static_cast<std::size_t>(next)] = false;
        stack.pop_back();
    }
}

std::vector<SwitchId> interior(const ForwardingPath& path) {
    if (path.switch_sequence.size() <= 2) return {};
    return {path.switch_sequence.begin() + 1, path.switch_sequence.end() - 1};
}

}  // namespace

std::vector<ForwardingPath> enumerate_paths(const Topology& topo, SwitchId src, SwitchId dst,
                                            const PathPolicy& policy) {
    if (src == dst) throw std::invalid_argument("enumerate_paths: src == dst");
    if (topo.tier(src) != SwitchTier::Edge || topo.tier(dst) != SwitchTier::Edge)
        throw std::invalid_argument("enumerate_paths: endpoints must be edge switches");

    const int shortest = shortest_hops(topo, src, dst);
    if (shortest < 0) throw NoPathError("no path between switches " + std::to_string(src) + " and " +
                                        std::to_string(dst));

    const int budget =
        policy.mode == PathMode::DisjointOnly ? shortest : shortest + policy.max_extra_hops;

    std::vector<ForwardingPath> candidates;
    std::vector<SwitchId> stack{src};
    std::vector<bool> on_stack(static_cast<std::size_t>(topo.switch_count()), false);
    on_stack[static_cast<std::size_t>(src)] = true;
    collect_simple_paths(topo, src, dst, budget, stack, on_stack, candidates);

    // Shortest-first greedy acceptance, ties broken lexicographically, keeps
    // the selection deterministic across runs.
    std::sort(candidates.begin(), candidates.end(), [](const ForwardingPath& a, const ForwardingPath& b) {
        if (a.switch_sequence.size() != b.switch_sequence.size())
            return a.switch_sequence.size() < b.switch_sequence.size();
        return a.switch_sequence < b.switch_sequence;
    });

    std::vector<ForwardingPath> accepted;
    std::set<SwitchId> used_interior;
    for (const auto& candidate : candidates) {
        const auto inner = interior(candidate);
        std::size_t shared = 0;
        for (SwitchId sw : inner)
            if (used_interior.count(sw)) ++shared;

        bool take = false;
        switch (policy.mode) {
            case PathMode::DisjointOnly:
            case PathMode::DisjointPlusNonOptimal:
                take = shared == 0;
                break;
            case PathMode::OverlapTolerant: {
                const double overlap =
                    inner.empty() ? 0.0 : static_cast<double>(shared) / static_cast<double>(inner.size());
                take = overlap <= policy.max_overlap_fraction;
                break;
            }
        }
        if (take) {
            accepted.push_back(candidate);
            used_interior.insert(inner.begin(), inner.end());
        }
    }

    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

const ForwardingPath& select_path(const std::vector<ForwardingPath>& paths, Rng& rng) {
    return rng.pick(paths);
}

Rational scan_probability(std::int64_t real_count, std::int64_t honey_count, std::int64_t path_count) {
    if (real_count < 0 || honey_count < 0)
        throw std::domain_error("scan_probability: negative connection count");
    if (real_count + honey_count == 0) throw std::domain_error("scan_probability: r + h must be > 0");
    if (path_count < 1) throw std::domain_error("scan_probability: p must be >= 1");
    return Rational(real_count, path_count * (real_count + honey_count));
}

const std::vector<ForwardingPath>& PathCache::paths(SwitchId src, SwitchId dst) {
    const auto key = std::make_pair(src, dst);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<ForwardingPath> result;
    if (src == dst) {
        result.push_back(ForwardingPath{{src}});
    } else {
        result = enumerate_paths(*topo_, src, dst, policy_);
    }
    return cache_.emplace(key, std::move(result)).first->second;
}

}  // namespace honeyroles

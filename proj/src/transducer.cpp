#include "ggr/transducer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ggr/util.hpp"

namespace ggr {

// ---------------------------------------------------------------------------
// GrowthBound

GrowthBound::GrowthBound(std::int64_t num, std::int64_t den, std::uint32_t dExp)
    : num(num), den(den), dExp(dExp) {
    if (num <= 0 || den <= 0 || dExp < 1)
        fail(ErrorKind::Growth, "growth bound requires cT > 0 and dExp >= 1");
    std::int64_t a = num, b = den;
    while (b) { std::int64_t r = a % b; a = b; b = r; }
    this->num /= a;
    this->den /= a;
}

GrowthBound GrowthBound::integer(std::int64_t c, std::uint32_t dExp) {
    return GrowthBound(c, 1, dExp);
}

bool GrowthBound::holds(std::uint64_t inLen, std::uint64_t outLen) const {
    // outLen * den <= num * inLen^dExp, saturating: an overflowing right side
    // is astronomically large, so the bound trivially holds.
    unsigned __int128 rhs = static_cast<unsigned __int128>(num);
    const unsigned __int128 cap = ~static_cast<unsigned __int128>(0) / 2;
    for (std::uint32_t i = 0; i < dExp; ++i) {
        if (inLen != 0 && rhs > cap / inLen) return true;
        rhs *= inLen;
    }
    unsigned __int128 lhs =
        static_cast<unsigned __int128>(outLen) * static_cast<unsigned __int128>(den);
    return lhs <= rhs;
}

double GrowthBound::cTDouble() const {
    double q = static_cast<double>(num) / static_cast<double>(den);
    while (static_cast<long double>(q) * static_cast<long double>(den) <
           static_cast<long double>(num))
        q = std::nextafter(q, std::numeric_limits<double>::infinity());
    return q;
}

std::string GrowthBound::print() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------------------
// FiniteTransducer

namespace {

bool edge_less(const Edge& a, const Edge& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.in.has_value() != b.in.has_value()) return !a.in.has_value();  // eps first
    if (a.in != b.in) return *a.in < *b.in;
    if (a.dst != b.dst) return a.dst < b.dst;
    return a.out.lexLess(b.out);
}

bool edge_equal(const Edge& a, const Edge& b) {
    return a.src == b.src && a.in == b.in && a.dst == b.dst && a.out == b.out;
}

bool valid_state_name(const std::string& n) {
    if (n.empty() || n == ":" || n == "@eps@") return false;
    for (char c : n)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return false;
    return true;
}

} // namespace

FiniteTransducer::FiniteTransducer(AlphabetRef inputAlphabet,
                                   AlphabetRef outputAlphabet,
                                   std::uint32_t stateCount, std::uint32_t initial,
                                   std::vector<std::uint32_t> halting,
                                   std::vector<Edge> edges,
                                   std::vector<std::string> stateNames)
    : inAlpha_(std::move(inputAlphabet)), outAlpha_(std::move(outputAlphabet)),
      stateCount_(stateCount), initial_(initial), halting_(stateCount, 0),
      edges_(std::move(edges)), stateNames_(std::move(stateNames)) {
    if (!inAlpha_ || !outAlpha_)
        fail(ErrorKind::Validation, "transducer requires both alphabets");
    if (stateCount_ == 0)
        fail(ErrorKind::Validation, "transducer requires at least one state");
    if (initial_ >= stateCount_)
        fail(ErrorKind::Validation, "initial state out of range");
    for (auto h : halting) {
        if (h >= stateCount_) fail(ErrorKind::Validation, "halting state out of range");
        halting_[h] = 1;
    }
    for (const auto& e : edges_) {
        if (e.src >= stateCount_ || e.dst >= stateCount_)
            fail(ErrorKind::Validation, "edge references a state out of range");
        if (e.in && *e.in >= inAlpha_->size())
            fail(ErrorKind::Validation, "edge input token out of range");
        require_same_alphabet(outAlpha_, e.out.alphabet(), "edge output");
    }
    if (stateNames_.empty()) {
        stateNames_.reserve(stateCount_);
        for (std::uint32_t s = 0; s < stateCount_; ++s)
            stateNames_.push_back("s" + std::to_string(s));
    }
    if (stateNames_.size() != stateCount_)
        fail(ErrorKind::Validation, "state name list does not match state count");
    std::set<std::string> seen;
    for (const auto& n : stateNames_) {
        if (!valid_state_name(n))
            fail(ErrorKind::Validation, "invalid state name: \"" + n + "\"");
        if (!seen.insert(n).second)
            fail(ErrorKind::Validation, "duplicate state name: " + n);
    }

    std::sort(edges_.begin(), edges_.end(), edge_less);
    edges_.erase(std::unique(edges_.begin(), edges_.end(), edge_equal), edges_.end());

    outgoing_.assign(stateCount_, {});
    for (std::uint32_t i = 0; i < edges_.size(); ++i)
        outgoing_[edges_[i].src].push_back(i);

    deterministic_ = true;
    for (std::uint32_t s = 0; s < stateCount_ && deterministic_; ++s) {
        std::set<TokenId> used;
        for (auto ei : outgoing_[s]) {
            const Edge& e = edges_[ei];
            if (!e.in || !used.insert(*e.in).second) {
                deterministic_ = false;
                break;
            }
        }
    }
}

std::optional<std::uint32_t> FiniteTransducer::stateByName(
    const std::string& name) const {
    for (std::uint32_t s = 0; s < stateCount_; ++s)
        if (stateNames_[s] == name) return s;
    return std::nullopt;
}

FiniteTransducer FiniteTransducer::withGrowthBound(GrowthBound b) const {
    FiniteTransducer copy = *this;
    copy.bound_ = b;
    return copy;
}

namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

} // namespace

FiniteTransducer FiniteTransducer::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::optional<std::vector<std::string>> inputs, outputs, finals;
    std::optional<std::string> initial;
    std::vector<std::vector<std::string>> edgeLines;
    std::vector<std::size_t> edgeLineNos;
    std::size_t lineNo = 0, initialLine = 0, finalLine = 0;
    auto header = [&](const std::vector<std::string>& parts, const char* key) {
        return !parts.empty() && parts[0] == key;
    };
    while (std::getline(in, line)) {
        ++lineNo;
        auto parts = split_ws(strip_comment(line));
        if (parts.empty()) continue;
        auto rest = [&]() {
            return std::vector<std::string>(parts.begin() + 1, parts.end());
        };
        auto once = [&](const auto& slot, const char* what) {
            if (slot)
                fail(ErrorKind::Parse, "line " + std::to_string(lineNo) +
                                           ": duplicate " + what + " header");
        };
        if (header(parts, "inputs:")) {
            once(inputs, "inputs:");
            inputs = rest();
        } else if (header(parts, "outputs:")) {
            once(outputs, "outputs:");
            outputs = rest();
        } else if (header(parts, "initial:")) {
            once(initial, "initial:");
            auto r = rest();
            if (r.size() != 1)
                fail(ErrorKind::Parse, "line " + std::to_string(lineNo) +
                                           ": initial: wants exactly one state");
            initial = r[0];
            initialLine = lineNo;
        } else if (header(parts, "final:")) {
            once(finals, "final:");
            finals = rest();
            finalLine = lineNo;
        } else {
            edgeLines.push_back(parts);
            edgeLineNos.push_back(lineNo);
        }
    }
    if (!inputs) fail(ErrorKind::Parse, "missing inputs: header");
    if (!outputs) fail(ErrorKind::Parse, "missing outputs: header");
    if (!initial) fail(ErrorKind::Parse, "missing initial: header");
    if (!finals) finals.emplace();

    auto inAlpha = Alphabet::make(*inputs);
    auto outAlpha = Alphabet::make(*outputs);

    std::vector<std::string> names;
    std::map<std::string, std::uint32_t> byName;
    auto intern = [&](const std::string& n, std::size_t atLine) {
        if (!valid_state_name(n))
            fail(ErrorKind::Parse, "line " + std::to_string(atLine) +
                                       ": invalid state name: \"" + n + "\"");
        auto it = byName.find(n);
        if (it != byName.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(names.size());
        names.push_back(n);
        byName.emplace(n, id);
        return id;
    };
    std::uint32_t init = intern(*initial, initialLine);
    std::vector<std::uint32_t> halting;
    for (const auto& f : *finals) halting.push_back(intern(f, finalLine));

    std::vector<Edge> edges;
    for (std::size_t i = 0; i < edgeLines.size(); ++i) {
        const auto& parts = edgeLines[i];
        const std::size_t at = edgeLineNos[i];
        if (parts.size() < 4 || parts[3] != ":")
            fail(ErrorKind::Parse,
                 "line " + std::to_string(at) +
                     ": edge wants `SRC DST IN : OUT...`, got \"" + parts[0] + " ...\"");
        Edge e;
        e.src = intern(parts[0], at);
        e.dst = intern(parts[1], at);
        if (parts[2] != "@eps@") e.in = inAlpha->require(parts[2]);
        std::vector<TokenId> out;
        for (std::size_t j = 4; j < parts.size(); ++j)
            out.push_back(outAlpha->require(parts[j]));
        e.out = TokenString(outAlpha, std::move(out));
        edges.push_back(std::move(e));
    }
    const std::uint32_t stateCount = static_cast<std::uint32_t>(names.size());
    return FiniteTransducer(inAlpha, outAlpha, stateCount, init, halting,
                            std::move(edges), std::move(names));
}

std::string FiniteTransducer::print() const {
    std::ostringstream out;
    out << "inputs:";
    for (const auto& t : inAlpha_->tokens()) out << ' ' << t;
    out << "\noutputs:";
    for (const auto& t : outAlpha_->tokens()) out << ' ' << t;
    out << "\ninitial: " << stateNames_[initial_] << "\nfinal:";
    for (std::uint32_t s = 0; s < stateCount_; ++s)
        if (halting_[s]) out << ' ' << stateNames_[s];
    out << '\n';
    for (const auto& e : edges_) {
        out << stateNames_[e.src] << ' ' << stateNames_[e.dst] << ' '
            << (e.in ? inAlpha_->spelling(*e.in) : std::string("@eps@")) << " :";
        for (TokenId t : e.out.ids()) out << ' ' << outAlpha_->spelling(t);
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// run / infer_growth_bound

std::optional<TokenString> run(const FiniteTransducer& t, const TokenString& s) {
    if (!t.deterministic())
        fail(ErrorKind::Validation,
             "run requires a deterministic transducer (this one is not)");
    require_same_alphabet(t.inputAlphabet(), s.alphabet(), "run input");
    std::uint32_t state = t.initial();
    TokenString out(t.outputAlphabet(), {});
    for (TokenId tok : s.ids()) {
        const Edge* found = nullptr;
        for (auto ei : t.edgesFrom(state)) {
            const Edge& e = t.edges()[ei];
            if (e.in && *e.in == tok) {
                found = &e;
                break;
            }
        }
        if (!found) return std::nullopt;
        out = out.concat(found->out);
        state = found->dst;
    }
    if (!t.halting(state)) return std::nullopt;
    if (t.growthBound() && !t.growthBound()->holds(s.length(), out.length()))
        fail(ErrorKind::Growth,
             "declared growth bound violated: input length " +
                 std::to_string(s.length()) + " produced output length " +
                 std::to_string(out.length()));
    return out;
}

GrowthBound infer_growth_bound(const FiniteTransducer& t) {
    // An epsilon-input cycle that can emit output makes output length
    // unbounded for a fixed input length. An epsilon edge lies on a cycle
    // iff its endpoints share a strongly connected component of the
    // epsilon subgraph (Kosaraju, two passes).
    const std::uint32_t n = t.stateCount();
    std::vector<std::vector<std::uint32_t>> fwd(n), bwd(n);
    std::vector<const Edge*> epsEdges;
    for (const auto& e : t.edges())
        if (!e.in) {
            fwd[e.src].push_back(e.dst);
            bwd[e.dst].push_back(e.src);
            epsEdges.push_back(&e);
        }
    std::vector<std::uint32_t> order;
    std::vector<char> seen(n, 0);
    for (std::uint32_t root = 0; root < n; ++root) {
        if (seen[root]) continue;
        // iterative post-order
        std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root, 0}};
        seen[root] = 1;
        while (!stack.empty()) {
            auto& [s, i] = stack.back();
            if (i < fwd[s].size()) {
                std::uint32_t d = fwd[s][i++];
                if (!seen[d]) {
                    seen[d] = 1;
                    stack.push_back({d, 0});
                }
            } else {
                order.push_back(s);
                stack.pop_back();
            }
        }
    }
    std::vector<std::uint32_t> scc(n, UINT32_MAX);
    std::uint32_t sccCount = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (scc[*it] != UINT32_MAX) continue;
        std::vector<std::uint32_t> stack{*it};
        scc[*it] = sccCount;
        while (!stack.empty()) {
            std::uint32_t s = stack.back();
            stack.pop_back();
            for (auto d : bwd[s])
                if (scc[d] == UINT32_MAX) {
                    scc[d] = sccCount;
                    stack.push_back(d);
                }
        }
        ++sccCount;
    }
    for (const Edge* e : epsEdges)
        if (scc[e->src] == scc[e->dst] && e->out.length() > 0)
            fail(ErrorKind::Growth,
                 "epsilon cycle with output: output length is unbounded");
    std::uint64_t maxOut = 1;
    for (const auto& e : t.edges()) maxOut = std::max<std::uint64_t>(maxOut, e.out.length());
    return GrowthBound::integer(static_cast<std::int64_t>(maxOut), 1);
}

// ---------------------------------------------------------------------------
// StatePartition / quotient

StatePartition::StatePartition(std::uint32_t stateCount,
                               std::vector<std::vector<std::uint32_t>> blocks)
    : stateCount_(stateCount), blocks_(std::move(blocks)),
      blockOf_(stateCount, UINT32_MAX) {
    for (auto& b : blocks_) {
        if (b.empty()) fail(ErrorKind::Validation, "empty partition block");
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::uint32_t covered = 0;
    for (std::uint32_t i = 0; i < blocks_.size(); ++i)
        for (auto s : blocks_[i]) {
            if (s >= stateCount_)
                fail(ErrorKind::Validation, "partition references unknown state");
            if (blockOf_[s] != UINT32_MAX)
                fail(ErrorKind::Validation, "partition blocks overlap");
            blockOf_[s] = i;
            ++covered;
        }
    if (covered != stateCount_)
        fail(ErrorKind::Validation, "partition does not cover every state");
}

StatePartition StatePartition::singletons(std::uint32_t stateCount) {
    std::vector<std::vector<std::uint32_t>> blocks(stateCount);
    for (std::uint32_t s = 0; s < stateCount; ++s) blocks[s] = {s};
    return StatePartition(stateCount, std::move(blocks));
}

StatePartition StatePartition::parse(const FiniteTransducer& t,
                                     const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::uint32_t>> blocks;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto parts = split_ws(strip_comment(line));
        if (parts.empty()) continue;
        std::vector<std::uint32_t> block;
        for (const auto& name : parts) {
            auto s = t.stateByName(name);
            if (!s)
                fail(ErrorKind::Parse, "line " + std::to_string(lineNo) +
                                           ": unknown state \"" + name + "\"");
            block.push_back(*s);
        }
        blocks.push_back(std::move(block));
    }
    return StatePartition(t.stateCount(), std::move(blocks));
}

std::string StatePartition::print(const FiniteTransducer& t) const {
    std::ostringstream out;
    for (const auto& b : blocks_) {
        for (std::size_t i = 0; i < b.size(); ++i)
            out << (i ? " " : "") << t.stateName(b[i]);
        out << '\n';
    }
    return out.str();
}

FiniteTransducer quotient(const FiniteTransducer& t, const StatePartition& p) {
    if (p.stateCount() != t.stateCount())
        fail(ErrorKind::Validation, "partition is over a different state count");
    const auto& blocks = p.blocks();
    std::set<std::string> taken;
    std::vector<std::string> names;
    for (const auto& b : blocks) {
        std::string n;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (i) n += '+';
            n += t.stateName(b[i]);
        }
        while (!taken.insert(n).second) n += '\'';
        names.push_back(n);
    }
    std::vector<std::uint32_t> halting;
    for (std::uint32_t i = 0; i < blocks.size(); ++i)
        for (auto s : blocks[i])
            if (t.halting(s)) {
                halting.push_back(i);
                break;
            }
    std::vector<Edge> edges;
    for (const auto& e : t.edges()) {
        Edge q = e;
        q.src = p.blockOf(e.src);
        q.dst = p.blockOf(e.dst);
        edges.push_back(std::move(q));
    }
    return FiniteTransducer(t.inputAlphabet(), t.outputAlphabet(),
                            static_cast<std::uint32_t>(blocks.size()),
                            p.blockOf(t.initial()), halting, std::move(edges),
                            std::move(names));
}

} // namespace ggr

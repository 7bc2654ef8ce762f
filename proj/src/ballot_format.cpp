#include "umpvote/ballot_format.hpp"

#include <fstream>
#include <optional>
#include <sstream>

namespace umpvote {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

struct RawBallot {
    int line;
    long count;
    std::string body;
};

Ranking parse_ranking(const RawBallot& raw, const AlternativeSet& alts) {
    std::vector<AltId> order;
    for (const auto& name : split(raw.body, '>')) {
        if (!alts.contains(name)) throw ParseError(raw.line, "unknown alternative '" + name + "'");
        order.push_back(alts.id(name));
    }
    if (static_cast<int>(order.size()) != alts.size())
        throw ParseError(raw.line, "ranking must list all " + std::to_string(alts.size()) + " alternatives");
    try {
        return Ranking(std::move(order));
    } catch (const std::invalid_argument&) {
        throw ParseError(raw.line, "ranking repeats an alternative");
    }
}

BinaryRelation parse_relation(const RawBallot& raw, const AlternativeSet& alts) {
    const int m = alts.size();
    if (m > kMaxAlternatives) throw ParseError(raw.line, "too many alternatives for a binary relation");
    std::vector<bool> seen(static_cast<std::size_t>(num_pairs(m)), false);
    BinaryRelation rel(m, 0);
    for (const auto& item : split(raw.body, ',')) {
        const auto parts = split(item, '>');
        if (parts.size() != 2) throw ParseError(raw.line, "expected 'x>y' pair, got '" + item + "'");
        for (const auto& p : parts)
            if (!alts.contains(p)) throw ParseError(raw.line, "unknown alternative '" + p + "'");
        const AltId x = alts.id(parts[0]);
        const AltId y = alts.id(parts[1]);
        if (x == y) throw ParseError(raw.line, "reflexive pair '" + item + "'");
        const auto idx = static_cast<std::size_t>(pair_index(m, x, y));
        if (seen[idx]) throw ParseError(raw.line, "pair listed twice: '" + item + "'");
        seen[idx] = true;
        rel = rel.with(x, y);
    }
    for (bool s : seen)
        if (!s) throw ParseError(raw.line, "binary relation must list all " + std::to_string(num_pairs(m)) + " pairs");
    return rel;
}

}  // namespace

Profile parse_profile(std::istream& in) {
    std::optional<AlternativeSet> alts;
    std::optional<BallotKind> kind;
    std::vector<RawBallot> raws;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto colon = t.find(':');
        if (colon == std::string::npos) throw ParseError(lineno, "expected 'count: ballot'");
        const std::string head = trim(std::string_view(t).substr(0, colon));
        const std::string body = trim(std::string_view(t).substr(colon + 1));
        if (head == "alts") {
            if (alts) throw ParseError(lineno, "duplicate 'alts:' header");
            try {
                alts = AlternativeSet(split(body, ','));
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
            if (alts->size() < 1) throw ParseError(lineno, "no alternatives declared");
            continue;
        }
        if (head == "kind") {
            if (body == "linear") kind = BallotKind::linear;
            else if (body == "binary") kind = BallotKind::binary;
            else throw ParseError(lineno, "kind must be 'linear' or 'binary'");
            continue;
        }
        long count = 0;
        std::size_t used = 0;
        try {
            count = std::stol(head, &used);
        } catch (const std::exception&) {
            throw ParseError(lineno, "invalid ballot count '" + head + "'");
        }
        if (used != head.size() || count <= 0) throw ParseError(lineno, "invalid ballot count '" + head + "'");
        if (body.empty()) throw ParseError(lineno, "empty ballot");
        raws.push_back({lineno, count, body});
    }
    if (!alts) throw ParseError(lineno, "missing 'alts:' header");
    if (raws.empty()) throw ParseError(lineno, "profile has no ballots");
    if (!kind) {
        kind = BallotKind::linear;
        for (const auto& r : raws)
            if (r.body.find(',') != std::string::npos) kind = BallotKind::binary;
    }
    std::vector<ProfileEntry> entries;
    for (const auto& r : raws) {
        if (*kind == BallotKind::linear) entries.push_back({parse_ranking(r, *alts), r.count});
        else entries.push_back({parse_relation(r, *alts), r.count});
    }
    return Profile(*alts, std::move(entries));
}

Profile parse_profile(const std::string& text) {
    std::istringstream in(text);
    return parse_profile(in);
}

Profile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file " + path.string());
    return parse_profile(in);
}

std::string format_ballot(const Ballot& b, const AlternativeSet& alts) {
    std::string out;
    if (const auto* r = std::get_if<Ranking>(&b)) {
        for (int p = 0; p < r->size(); ++p) {
            if (p) out += '>';
            out += alts.name(r->at(p));
        }
        return out;
    }
    const auto& rel = std::get<BinaryRelation>(b);
    const int m = rel.size();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            if (!out.empty()) out += ", ";
            out += rel.prefers(i, j) ? alts.name(i) + ">" + alts.name(j) : alts.name(j) + ">" + alts.name(i);
        }
    return out;
}

std::string format_profile(const Profile& profile) {
    std::string out = "alts: ";
    const auto& alts = profile.alternatives();
    for (int i = 0; i < alts.size(); ++i) {
        if (i) out += ',';
        out += alts.name(i);
    }
    out += '\n';
    if (profile.kind() == BallotKind::binary) out += "kind: binary\n";
    for (const auto& e : profile.entries())
        out += std::to_string(e.count) + ": " + format_ballot(e.ballot, alts) + '\n';
    return out;
}

}  // namespace umpvote

#pragma once

#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace matchshift {

// Instance text format, one profile per file / section:
//   sm <n_left> <n_right>          or   hr <n_residents> <n_hospitals>
//   m1: w2 (w1 w3) w4              ties in parentheses
//   w1: m1 m2                      (SM right side)
//   h1[2]: m1 m3                   (HR right side, quota in brackets)
// A missing line or `m1:` means an empty list. An InstancePair file holds
// three sections `#profile1`, `#profile2`, `#matching1` (lines `m<i> w<j>`),
// plus `k=<int>` and optional `b=<int>`.

namespace detail {

inline std::string trim(std::string_view s)
{
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline int parse_agent_token(const std::string & tok, char expected_prefix, char alt_prefix, int limit, const std::string & ctx)
{
    if (tok.size() < 2 || (tok[0] != expected_prefix && tok[0] != alt_prefix))
        throw ParseError("bad agent token '" + tok + "' in " + ctx);
    int idx = 0;
    try {
        idx = std::stoi(tok.substr(1));
    }
    catch (...) {
        throw ParseError("bad agent token '" + tok + "' in " + ctx);
    }
    if (idx < 1 || idx > limit)
        throw IndexOutOfRange("agent token '" + tok + "' out of range in " + ctx);
    return idx - 1;
}

inline PreferenceList parse_pref_tokens(const std::string & rest, char prefix, char alt_prefix, int limit, const std::string & ctx)
{
    PreferenceList list;
    std::istringstream in(rest);
    std::string tok;
    bool in_tie = false;
    while (in >> tok) {
        bool open = false, close = false;
        if (tok.front() == '(') {
            open = true;
            tok.erase(tok.begin());
        }
        if (! tok.empty() && tok.back() == ')') {
            close = true;
            tok.pop_back();
        }
        if (open) {
            if (in_tie)
                throw ParseError("nested '(' in " + ctx);
            in_tie = true;
            list.tie_groups.emplace_back();
        }
        if (! tok.empty()) {
            if (! in_tie)
                list.tie_groups.push_back({});
            list.tie_groups.back().push_back(parse_agent_token(tok, prefix, alt_prefix, limit, ctx));
        }
        if (close) {
            if (! in_tie)
                throw ParseError("unmatched ')' in " + ctx);
            in_tie = false;
        }
    }
    if (in_tie)
        throw ParseError("unterminated tie group in " + ctx);
    return list;
}

} // namespace detail

// Parses one profile from the given lines; `normalize` runs
// validate_and_normalize before returning.
inline PreferenceProfile parse_profile_lines(const std::vector<std::string> & lines, bool normalize = true)
{
    if (lines.empty())
        throw ParseError("empty profile text");
    std::istringstream header(lines.front());
    std::string kind;
    int nl = 0, nr = 0;
    if (! (header >> kind >> nl >> nr) || (kind != "sm" && kind != "hr") || nl < 0 || nr < 0)
        throw ParseError("bad profile header '" + lines.front() + "'");

    PreferenceProfile p = kind == "sm" ? PreferenceProfile::sm(nl, nr)
                                       : PreferenceProfile::hr(nl, nr, std::vector<int>(nr, 1));
    const char right_prefix = kind == "sm" ? 'w' : 'h';

    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string line = detail::trim(lines[i]);
        if (line.empty())
            continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("expected '<agent>: <prefs>' but got '" + line + "'");
        std::string name = detail::trim(line.substr(0, colon));
        std::string rest = line.substr(colon + 1);
        if (name.empty())
            throw ParseError("missing agent name in '" + line + "'");

        if (name[0] == 'm' || name[0] == 'r') {
            int m = detail::parse_agent_token(name, 'm', 'r', nl, "left agent line");
            p.left[m] = detail::parse_pref_tokens(rest, right_prefix, right_prefix, nr, name + "'s list");
        }
        else if (name[0] == right_prefix) {
            int quota = 1;
            auto bracket = name.find('[');
            if (bracket != std::string::npos) {
                auto end = name.find(']');
                if (end == std::string::npos || end < bracket)
                    throw ParseError("bad quota in '" + name + "'");
                quota = std::stoi(name.substr(bracket + 1, end - bracket - 1));
                name = name.substr(0, bracket);
            }
            int w = detail::parse_agent_token(name, right_prefix, right_prefix, nr, "right agent line");
            if (kind == "hr")
                p.capacities[w] = quota;
            else if (quota != 1)
                throw ParseError("quota given for SM agent '" + name + "'");
            p.right[w] = detail::parse_pref_tokens(rest, 'm', 'r', nl, name + "'s list");
        }
        else
            throw ParseError("unrecognised agent name '" + name + "'");
    }
    return normalize ? validate_and_normalize(p) : p;
}

inline PreferenceProfile parse_profile(const std::string & text, bool normalize = true)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    while (! lines.empty() && detail::trim(lines.front()).empty())
        lines.erase(lines.begin());
    return parse_profile_lines(lines, normalize);
}

inline std::string serialize_profile(const PreferenceProfile & p)
{
    std::ostringstream out;
    const bool hr = p.mode == Mode::HR;
    out << (hr ? "hr " : "sm ") << p.n_left() << ' ' << p.n_right() << '\n';
    const char right_prefix = hr ? 'h' : 'w';
    auto emit_list = [&](const PreferenceList & l, char prefix) {
        bool first = true;
        for (const auto & g : l.tie_groups) {
            if (! first)
                out << ' ';
            first = false;
            if (g.size() > 1)
                out << '(';
            for (std::size_t i = 0; i < g.size(); ++i)
                out << (i ? " " : "") << prefix << g[i] + 1;
            if (g.size() > 1)
                out << ')';
        }
    };
    for (int m = 0; m < p.n_left(); ++m) {
        out << 'm' << m + 1 << ':';
        if (! p.left[m].empty()) {
            out << ' ';
            emit_list(p.left[m], right_prefix);
        }
        out << '\n';
    }
    for (int w = 0; w < p.n_right(); ++w) {
        out << right_prefix << w + 1;
        if (hr)
            out << '[' << p.capacities[w] << ']';
        out << ':';
        if (! p.right[w].empty()) {
            out << ' ';
            emit_list(p.right[w], 'm');
        }
        out << '\n';
    }
    return out.str();
}

inline InstancePair parse_instance_pair(const std::string & text)
{
    std::vector<std::string> p1, p2;
    Matching m1;
    long long k = 0, b = 0;
    bool saw_k = false;

    int section = 0; // 0 none, 1 profile1, 2 profile2, 3 matching1
    std::istringstream in(text);
    int n_left_hint = 0, n_right_hint = 0;
    for (std::string raw; std::getline(in, raw);) {
        std::string line = detail::trim(raw);
        if (line.empty())
            continue;
        if (line == "#profile1") { section = 1; continue; }
        if (line == "#profile2") { section = 2; continue; }
        if (line == "#matching1") { section = 3; continue; }
        if (line.rfind("k=", 0) == 0) { k = std::stoll(line.substr(2)); saw_k = true; continue; }
        if (line.rfind("b=", 0) == 0) { b = std::stoll(line.substr(2)); continue; }
        switch (section) {
        case 1: p1.push_back(line); break;
        case 2: p2.push_back(line); break;
        case 3: {
            std::istringstream ls(line);
            std::string a, c;
            if (! (ls >> a >> c))
                throw ParseError("bad matching line '" + line + "'");
            int l = detail::parse_agent_token(a, 'm', 'r', 1 << 28, "matching");
            int r = detail::parse_agent_token(c, 'w', 'h', 1 << 28, "matching");
            if (l >= n_left_hint || r >= n_right_hint)
                throw IndexOutOfRange("matching line '" + line + "' out of range");
            m1.pairs.emplace_back(l, r);
            break;
        }
        default:
            throw ParseError("line '" + line + "' outside any section");
        }
        if (section == 1 && p1.size() == 1) {
            std::istringstream hs(p1.front());
            std::string kind;
            hs >> kind >> n_left_hint >> n_right_hint;
        }
    }
    if (p1.empty() || p2.empty())
        throw ParseError("instance pair needs #profile1 and #profile2 sections");
    if (! saw_k)
        throw ParseError("instance pair is missing its k= line");

    InstancePair pair;
    pair.profile1 = parse_profile_lines(p1);
    pair.profile2 = parse_profile_lines(p2);
    if (pair.profile1.n_left() != pair.profile2.n_left() || pair.profile1.n_right() != pair.profile2.n_right())
        throw ParseError("profile1 and profile2 are over different agent sets");
    m1.normalise();
    pair.matching1 = m1;
    pair.budget_k = k;
    pair.budget_b = b;
    if (! is_stable(pair.matching1, pair.profile1))
        throw ParseError("matching1 is not stable in profile1");
    return pair;
}

inline std::string serialize_instance_pair(const InstancePair & pair)
{
    std::ostringstream out;
    const char right_prefix = pair.profile1.mode == Mode::HR ? 'h' : 'w';
    out << "#profile1\n" << serialize_profile(pair.profile1);
    out << "#profile2\n" << serialize_profile(pair.profile2);
    out << "#matching1\n";
    for (auto [l, r] : pair.matching1.pairs)
        out << 'm' << l + 1 << ' ' << right_prefix << r + 1 << '\n';
    out << "k=" << pair.budget_k << '\n';
    out << "b=" << pair.budget_b << '\n';
    return out.str();
}

inline std::string read_file(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string & path, const std::string & content)
{
    std::ofstream out(path, std::ios::binary);
    if (! out)
        throw Error("cannot write " + path);
    out << content;
}

// Stable fingerprint of a profile, used by change scripts to detect replay
// against the wrong profile.
inline std::uint64_t profile_fingerprint(const PreferenceProfile & p)
{
    std::uint64_t h = 0x6d61746368ULL ^ (p.mode == Mode::HR ? 0x4852ULL : 0x534dULL);
    auto mixin = [&h](std::uint64_t v) { h = (h ^ v) * 0x100000001b3ULL; h ^= h >> 29; };
    mixin(p.n_left());
    mixin(p.n_right());
    for (int c : p.capacities)
        mixin(static_cast<std::uint64_t>(c) + 0x9e37);
    auto walk = [&](const std::vector<PreferenceList> & side) {
        for (const auto & l : side) {
            mixin(0x5eed);
            for (const auto & g : l.tie_groups) {
                mixin(g.size());
                for (int x : g)
                    mixin(static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL + 1);
            }
        }
    };
    walk(p.left);
    walk(p.right);
    return h;
}

} // namespace matchshift

#pragma once

// Text ballot format, one ballot per line:
//
//   # comment
//   alts: a,b,c
//   kind: binary            (optional; inferred from the ballots otherwise)
//   3: a>b>c                (ranking)
//   1: a>b, c>a, b>c        (binary relation, all C(m,2) pairs)

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

#include "umpvote/rank_core.hpp"

namespace umpvote {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

Profile parse_profile(std::istream& in);
Profile parse_profile(const std::string& text);
Profile load_profile(const std::filesystem::path& path);

std::string format_ballot(const Ballot& b, const AlternativeSet& alts);
std::string format_profile(const Profile& profile);

}  // namespace umpvote

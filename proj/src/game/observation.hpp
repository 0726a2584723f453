#pragma once

#include <string>
#include <variant>
#include <vector>

namespace ttl::game {

struct QA {
  std::string question;
  std::string answer;  // "Yes" | "No" | "Invalid"

  bool operator==(const QA&) const = default;
};

struct TwentyQView {
  std::vector<QA> history;
  int max_turns = 20;
};

struct Clue {
  std::string player;
  int round = 0;
  std::string text;
};

struct VoteRecord {
  int round = 0;
  std::string voter;
  std::string target;
};

// What one Undercover seat is allowed to see.
struct UndercoverView {
  std::string self;
  std::string word;
  std::vector<std::string> players;  // seating order
  std::vector<std::string> alive;
  std::vector<Clue> clues;
  std::vector<VoteRecord> votes;  // completed voting rounds only
  std::vector<std::string> eliminated;
  int round = 0;  // speaking round k or voting round v of the current phase
};

using Observation = std::variant<std::monostate, TwentyQView, UndercoverView>;

}  // namespace ttl::game

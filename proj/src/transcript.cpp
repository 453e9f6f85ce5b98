#include <sstream>

#include <json.hpp>

#include "mdsearch/errors.hpp"
#include "mdsearch/evaluator.hpp"

namespace mdsearch {

namespace {

using nlohmann::json;

json coords_json(std::span<const Coord> coords) { return json(std::vector<Coord>(coords.begin(), coords.end())); }

Point point_from_json(const json& j) { return Point(j.get<std::vector<Coord>>()); }

}  // namespace

std::string Transcript::to_jsonl() const {
  json header = {
      {"shape", coords_json(shape.dims())},
      {"strategy", strategy},
      {"adversary", adversary},
      {"target", target ? coords_json(target->coords()) : json(nullptr)},
      {"queries", events.size()},
      {"outcome", std::string(to_string(outcome))},
  };
  std::string out = header.dump() + '\n';
  for (const auto& event : events) {
    json line = {{"q", coords_json(event.query.coords())}};
    if (event.reply.is_found()) {
      line["reply"] = "found";
    } else {
      line["reply"] = {{"corner", event.reply.corner().as_bits()}};
    }
    out += line.dump() + '\n';
  }
  return out;
}

Transcript Transcript::from_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<Transcript> t;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (!t) {
        GridShape shape(j.at("shape").get<std::vector<Coord>>());
        std::optional<Point> target;
        if (!j.at("target").is_null()) target = point_from_json(j.at("target"));
        t.emplace(Transcript{shape, j.at("strategy").get<std::string>(), j.at("adversary").get<std::string>(),
                             target, {}, outcome_from_string(j.at("outcome").get<std::string>())});
        continue;
      }
      Point q = point_from_json(j.at("q"));
      const json& reply = j.at("reply");
      if (reply.is_string()) {
        if (reply.get<std::string>() != "found") throw ArgumentError("transcript: unknown reply '" + reply.dump() + "'");
        t->events.push_back({std::move(q), Reply::found()});
      } else {
        const auto bits = reply.at("corner").get<std::vector<int>>();
        if (bits.empty() || bits.size() > kMaxDimension) throw ArgumentError("transcript: bad corner length");
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
          if (bits[i] != 0 && bits[i] != 1) throw ArgumentError("transcript: corner bits must be 0 or 1");
          mask |= static_cast<std::uint32_t>(bits[i]) << i;
        }
        t->events.push_back({std::move(q), Reply::corner(ReplyCorner(bits.size(), mask))});
      }
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("transcript: malformed JSON line: ") + e.what());
  }
  if (!t) throw ArgumentError("transcript: missing header line");
  return *t;
}

}  // namespace mdsearch

#pragma once

#include "pnc/net.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace pnc {

struct ReductionTrace;

/// Line-oriented format:
///   net NAME
///   pl ID (NAT)
///   tr ID IN... -> OUT...      where IN/OUT is ID or ID*NAT
/// `#` starts a comment. Places referenced only by arcs are created with 0 tokens.
/// Throws ParseError with the line and column of the first problem.
Net parse_net(std::string_view text, const std::string& default_name = "net");
Net read_net_file(const std::filesystem::path& path);

std::string serialize_net(const Net& net);

/// One "K |- equation" line per step.
std::string serialize_trace(const ReductionTrace& trace);

/// Parses trace lines and replays them on `initial`. Throws ParseError on syntax
/// errors and Error when a step cannot be applied.
ReductionTrace parse_trace(std::string_view text, const Net& initial);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace pnc

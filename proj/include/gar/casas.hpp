#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gar/event_model.hpp"

namespace gar {

/// Episodes recovered from a CASAS-style sensor log.
///
/// Each line is `date time sensor value [activity [begin|end]]`. Activity
/// names lose any leading resident prefix ("R1_", "P2-", "1-") so that
/// episodes of different residents share one label. Episodes are either
/// delimited by begin/end markers or, without markers, formed by runs of
/// lines carrying the same activity.
struct CasasDataset {
    SourceRegistry registry;
    std::vector<Episode> episodes;
};

std::string strip_user_id(std::string_view activity);

/// Milliseconds since the Unix epoch for `YYYY-MM-DD` and
/// `HH:MM:SS[.fraction]`, interpreted as UTC. Throws Parse.
TimeMs parse_casas_timestamp(std::string_view date, std::string_view time);

CasasDataset read_casas(std::istream& in, std::string_view origin = "<casas>");
CasasDataset load_casas(const std::vector<std::filesystem::path>& files);

}  // namespace gar

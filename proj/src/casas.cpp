#include "gar/casas.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gar/error.hpp"

namespace gar {

std::string strip_user_id(std::string_view activity) {
    // [letter]digits followed by '-' or '_'
    std::size_t i = 0;
    if (i < activity.size() && std::isalpha(static_cast<unsigned char>(activity[i])) && activity.size() > 1 &&
        std::isdigit(static_cast<unsigned char>(activity[1]))) {
        ++i;
    }
    const std::size_t digits_start = i;
    while (i < activity.size() && std::isdigit(static_cast<unsigned char>(activity[i]))) ++i;
    if (i > digits_start && i < activity.size() && (activity[i] == '-' || activity[i] == '_') &&
        i + 1 < activity.size()) {
        return std::string(activity.substr(i + 1));
    }
    return std::string(activity);
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

int to_int(std::string_view s, std::string_view what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::Parse, "invalid " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
}

bool is_number(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string sanitize(std::string_view text) {
    std::string out;
    for (char c : text) out += (c == '(' || c == ')' || c == ',' || c == ' ' || c == '\t') ? '_' : c;
    return out;
}

struct Line {
    std::size_t number = 0;
    RawRecord record;
    std::string activity;
    std::string marker;
};

}  // namespace

TimeMs parse_casas_timestamp(std::string_view date, std::string_view time) {
    if (date.size() != 10 || date[4] != '-' || date[7] != '-') {
        throw Error(ErrorCode::Parse, "invalid date '" + std::string(date) + "'");
    }
    const int y = to_int(date.substr(0, 4), "year");
    const int mo = to_int(date.substr(5, 2), "month");
    const int d = to_int(date.substr(8, 2), "day");
    if (time.size() < 8 || time[2] != ':' || time[5] != ':') {
        throw Error(ErrorCode::Parse, "invalid time '" + std::string(time) + "'");
    }
    const int h = to_int(time.substr(0, 2), "hour");
    const int mi = to_int(time.substr(3, 2), "minute");
    const int s = to_int(time.substr(6, 2), "second");
    int ms = 0;
    if (time.size() > 8) {
        if (time[8] != '.') throw Error(ErrorCode::Parse, "invalid time '" + std::string(time) + "'");
        auto frac = std::string(time.substr(9, 3));
        while (frac.size() < 3) frac += '0';
        ms = to_int(frac, "fraction");
    }
    const long long days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    return ((days * 24 + h) * 60 + mi) * 60'000LL + s * 1000LL + ms;
}

CasasDataset read_casas(std::istream& in, std::string_view origin) {
    std::vector<Line> lines;
    std::string text;
    std::size_t number = 0;
    while (std::getline(in, text)) {
        ++number;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        std::istringstream fields(text);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() < 4) {
            throw Error(ErrorCode::Parse, std::string(origin) + ":" + std::to_string(number) +
                                              ": expected 'date time sensor value [activity]'");
        }
        Line line;
        line.number = number;
        try {
            line.record.timestamp = parse_casas_timestamp(tok[0], tok[1]);
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, std::string(origin) + ":" + std::to_string(number) + ": " + e.detail());
        }
        line.record.source_id = sanitize(tok[2]);
        line.record.value = sanitize(tok[3]);
        if (tok.size() >= 5) line.activity = sanitize(strip_user_id(tok[4]));
        if (tok.size() >= 6) {
            std::string m = tok[5];
            std::transform(m.begin(), m.end(), m.begin(), [](unsigned char c) { return std::tolower(c); });
            if (m == "begin" || m == "end") line.marker = m;
        }
        lines.push_back(std::move(line));
    }

    // Registry: numeric sensors are split at their median reading, the
    // rest keep their discrete states. Item sensors are the only objects
    // residents manipulate directly, so they count as actuators.
    std::map<std::string, std::vector<std::string>> values;
    for (const auto& l : lines) values[l.record.source_id].push_back(l.record.value);
    CasasDataset out;
    for (auto& [sensor, vals] : values) {
        SourceSpec spec;
        spec.id = sensor;
        spec.label_prefix = sensor + "_";
        spec.context = sensor;
        spec.window = 1;
        const bool numeric = std::all_of(vals.begin(), vals.end(), is_number);
        if (numeric) {
            spec.kind = SmartObjectKind::PervasiveSensor;
            spec.label_prefix = sensor;
            std::vector<double> readings;
            for (const auto& v : vals) readings.push_back(std::stod(v));
            std::sort(readings.begin(), readings.end());
            spec.thresholds = {readings[readings.size() / 2]};
        } else {
            spec.kind = sensor.starts_with("I") ? SmartObjectKind::Actuator : SmartObjectKind::PervasiveSensor;
            std::set<std::string> states(vals.begin(), vals.end());
            spec.states.assign(states.begin(), states.end());
        }
        out.registry.add(std::move(spec));
    }

    std::map<std::string, std::size_t> per_activity;
    std::vector<RawRecord> current;
    std::string current_activity;
    bool delimited = false;
    auto flush = [&] {
        if (!current_activity.empty() && !current.empty()) {
            const auto n = ++per_activity[current_activity];
            out.episodes.push_back(build_episode(convert_records(current, out.registry), current_activity,
                                                 current_activity + "-" + std::to_string(n)));
        }
        current.clear();
        current_activity.clear();
        delimited = false;
    };
    for (const auto& l : lines) {
        if (l.marker == "begin") {
            flush();
            current_activity = l.activity;
            delimited = true;
            current.push_back(l.record);
            continue;
        }
        if (delimited) {
            current.push_back(l.record);
            if (l.marker == "end") flush();
            continue;
        }
        if (l.activity != current_activity) flush();
        if (l.activity.empty()) continue;
        current_activity = l.activity;
        current.push_back(l.record);
    }
    flush();
    return out;
}

CasasDataset load_casas(const std::vector<std::filesystem::path>& files) {
    std::stringstream merged;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw Error(ErrorCode::Io, "cannot open '" + f.string() + "'");
        merged << in.rdbuf() << '\n';
    }
    return read_casas(merged, files.empty() ? "<casas>" : files.front().string());
}

}  // namespace gar

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gar/eval_harness.hpp"
#include "gar/synthetic.hpp"

namespace {

struct Setup {
    std::vector<gar::Episode> episodes;
    gar::ExperimentContext context;
};

Setup setup(const gar::SyntheticSpec& spec, std::size_t target = 20) {
    auto corpus = gar::generate_corpus(spec);
    Setup s;
    s.episodes = corpus.episodes;
    s.context.vocabulary = gar::KnowledgeBase::from_registry(corpus.registry);
    s.context.declarations = corpus.declarations;
    s.context.pipeline.target_pattern_count = target;
    return s;
}

std::size_t events_in(const std::vector<gar::Episode>& eps) {
    std::size_t n = 0;
    for (const auto& e : eps) n += e.events.size();
    return n;
}

}  // namespace

TEST_CASE("loocv on a separable corpus is perfect") {
    auto s = setup(gar::separable_corpus_spec(5, 4));
    auto result = gar::loocv(s.episodes, s.context);
    CHECK(result.metrics.macro_f1 == 1.0);
    CHECK(result.metrics.micro_f1 == 1.0);
    CHECK(result.predictions.size() == s.episodes.size());
    CHECK(result.confusion.total() == s.episodes.size());
    for (std::size_t i = 0; i < s.episodes.size(); ++i) CHECK(result.predictions[i].episode_id == s.episodes[i].id);
}

TEST_CASE("loocv with identical GAs cannot separate them") {
    auto s = setup(gar::separable_corpus_spec(4, 4));
    std::vector<gar::Episode> twins;
    for (const auto& e : s.episodes) {
        if (e.ga_label != s.episodes.front().ga_label) continue;
        auto a = e;
        a.ga_label = "Twin1";
        a.id += "-1";
        auto b = e;
        b.ga_label = "Twin2";
        b.id += "-2";
        twins.push_back(a);
        twins.push_back(b);
    }
    auto result = gar::loocv(twins, s.context);
    CHECK(result.metrics.macro_recall <= 0.75);
    CHECK(result.metrics.micro_recall == doctest::Approx(result.metrics.micro_f1));
    CHECK(result.confusion.total() == twins.size());
}

TEST_CASE("loocv needs three episodes per GA and labels") {
    auto s = setup(gar::separable_corpus_spec(2, 4));
    CHECK(fixture::error_code([&] { gar::loocv(s.episodes, s.context); }) == gar::ErrorCode::InsufficientData);
    auto more = setup(gar::separable_corpus_spec(3, 4));
    more.episodes[0].ga_label.reset();
    CHECK(fixture::error_code([&] { gar::loocv(more.episodes, more.context); }) == gar::ErrorCode::MissingLabel);
    std::vector<gar::Episode> shorter(more.episodes.begin() + 1, more.episodes.end());
    CHECK(fixture::error_code([&] { gar::loocv_with_training(more.episodes, shorter, more.context); }) ==
          gar::ErrorCode::InvalidArgument);
}

TEST_CASE("parallel folds give the same result") {
    auto s = setup(gar::meeting_room_corpus_spec(4, 6));
    auto serial = gar::loocv(s.episodes, s.context);
    s.context.jobs = 3;
    auto parallel = gar::loocv(s.episodes, s.context);
    REQUIRE(serial.predictions.size() == parallel.predictions.size());
    for (std::size_t i = 0; i < serial.predictions.size(); ++i) {
        CHECK(serial.predictions[i].predicted == parallel.predictions[i].predicted);
    }
}

TEST_CASE("every ablation mode yields well-formed metrics") {
    auto s = setup(gar::meeting_room_corpus_spec(3, 8));
    for (auto mode : gar::kAllAblationModes) {
        auto r = gar::run_ablation(s.episodes, s.context, mode);
        for (double v : {r.metrics.macro_f1, r.metrics.macro_recall, r.metrics.macro_precision,
                         r.metrics.macro_specificity, r.metrics.micro_f1}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(r.metrics.micro_recall == doctest::Approx(r.metrics.micro_f1));
    }
}

TEST_CASE("noise injection") {
    auto s = setup(gar::meeting_room_corpus_spec(5, 2));
    gar::NoiseSpec none;
    CHECK(gar::inject_noise(s.episodes, none, s.context.vocabulary) == s.episodes);

    gar::NoiseSpec spec;
    spec.noisy_episode_ratio = 0.3;
    spec.seed = 5;
    auto a = gar::inject_noise(s.episodes, spec, s.context.vocabulary);
    CHECK(a == gar::inject_noise(s.episodes, spec, s.context.vocabulary));
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        changed += a[i] == s.episodes[i] ? 0 : 1;
        CHECK(a[i].ga_label == s.episodes[i].ga_label);
        CHECK(std::is_sorted(a[i].events.begin(), a[i].events.end(), gar::event_order));
    }
    const auto selected = static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(s.episodes.size())));
    CHECK(changed <= selected);
    CHECK(changed > 0);

    // only false events: each selected episode exactly doubles
    gar::NoiseSpec all_false;
    all_false.noisy_episode_ratio = 1.0;
    all_false.missing_probability = 0.0;
    all_false.false_probability = 1.0;
    auto doubled = gar::inject_noise(s.episodes, all_false, s.context.vocabulary);
    CHECK(events_in(doubled) == 2 * events_in(s.episodes));
    for (const auto& e : doubled) {
        for (const auto& ev : e.events) CHECK(s.context.vocabulary.is_about.contains(ev.label));
    }

    gar::NoiseSpec all_missing;
    all_missing.noisy_episode_ratio = 1.0;
    all_missing.missing_probability = 1.0;
    all_missing.false_probability = 0.0;
    CHECK(events_in(gar::inject_noise(s.episodes, all_missing, s.context.vocabulary)) == 0);

    gar::NoiseSpec bad;
    bad.missing_probability = 1.5;
    CHECK(fixture::error_code([&] { gar::inject_noise(s.episodes, bad, s.context.vocabulary); }) ==
          gar::ErrorCode::InvalidArgument);
}

TEST_CASE("noise sweep keeps held-out episodes clean") {
    auto s = setup(gar::separable_corpus_spec(4, 3));
    std::vector<double> ratios{0.0, 0.4};
    auto rows = gar::noise_sweep(s.episodes, s.context, ratios, gar::NoiseSpec{});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ratio == 0.0);
    CHECK(rows[0].macro_f1 == 1.0);
    CHECK(rows[1].macro_f1 >= 0.0);
}

TEST_CASE("pattern count sweep on a separable corpus is flat") {
    auto s = setup(gar::separable_corpus_spec(4, 3));
    std::vector<std::size_t> counts{5, 10, 30};
    auto rows = gar::sweep_pattern_count(s.episodes, s.context, counts);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.macro_f1 == 1.0);
        CHECK(r.thresholds.size() == 3);
        for (const auto& [ga, t] : r.thresholds) {
            CHECK(t > 0.0);
            CHECK(t <= 1.0);
        }
    }
    std::vector<std::size_t> zero{0};
    CHECK(fixture::error_code([&] { gar::sweep_pattern_count(s.episodes, s.context, zero); }) ==
          gar::ErrorCode::InvalidArgument);
}

TEST_CASE("runtime measurement") {
    auto s = setup(gar::separable_corpus_spec(6, 3));
    std::vector<std::size_t> sizes{6, 12};
    auto rows = gar::measure_runtime(s.episodes, s.context, sizes, 1, 7);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.repeats == 3);
        CHECK(r.mean_train_seconds >= 0.0);
        CHECK(r.mean_inference_seconds >= 0.0);
        CHECK(r.mean_total_seconds == doctest::Approx(r.mean_train_seconds + r.mean_inference_seconds));
    }
    CHECK(rows[0].episodes == 6);
    std::vector<std::size_t> too_big{19};
    std::vector<std::size_t> too_small{5};
    CHECK(fixture::error_code([&] { gar::measure_runtime(s.episodes, s.context, too_small, 3, 7); }) ==
          gar::ErrorCode::InvalidArgument);
    CHECK(fixture::error_code([&] { gar::measure_runtime(s.episodes, s.context, too_big, 3, 7); }) ==
          gar::ErrorCode::InvalidArgument);
}

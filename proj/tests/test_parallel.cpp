#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "coltype/annotator.hpp"
#include "coltype/finetune.hpp"
#include "coltype/mock_backend.hpp"
#include "coltype/parallel.hpp"
#include "coltype/pseudotable.hpp"

using namespace coltype;

TEST_CASE("parallel_for visits every index exactly once") {
  for (const ExecMode mode : {ExecMode::Serial, ExecMode::Parallel}) {
    std::vector<std::atomic<int>> visits(257);
    parallel_for(visits.size(), mode, [&](std::size_t i) { ++visits[i]; });
    for (const auto& count : visits) CHECK(count == 1);
  }
  parallel_for(0, ExecMode::Parallel, [](std::size_t) { FAIL("must not run"); });
}

TEST_CASE("parallel_for rethrows a body exception") {
  for (const ExecMode mode : {ExecMode::Serial, ExecMode::Parallel}) {
    std::atomic<int> completed{0};
    CHECK_THROWS_AS(parallel_for(64, mode,
                                 [&](std::size_t i) {
                                   if (i == 13) throw std::runtime_error("boom");
                                   ++completed;
                                 }),
                    std::runtime_error);
    CHECK(completed <= 63);
  }
}

namespace {

struct Fixture {
  ClassSet classes;
  ClassPrototypeStore store;
  DomainConfig config;
  std::vector<InputTable> tables;

  Fixture() {
    std::vector<std::string> names;
    for (int i = 0; i < 24; ++i) names.push_back("Class" + std::to_string(i));
    classes = ClassSet::from_names(names);

    const MockBackend mock;
    store = generate_all_prototypes(classes, 40, mock);

    config.learn_classes = classes;
    rng::Stream stream(rng::derive_key({31337}));
    for (int i = 0; i < 80; ++i) {
      TableSchema schema;
      const std::size_t width = 1 + stream.next_below(4);
      for (std::size_t c = 0; c < width; ++c)
        schema.headers.push_back(classes.at(stream.next_below(classes.size())));
      config.schemas.schemas.push_back(std::move(schema));
    }

    for (int i = 0; i < 60; ++i) {
      InputTable table;
      table.id = "t" + std::to_string(i);
      table.columns = generate_pseudo_table(config.schemas.schemas[i % 80], store, 3,
                                            SamplerSeed{77, 0}, i)
                          .columns;
      tables.push_back(std::move(table));
    }
  }
};

}  // namespace

TEST_CASE("prototype generation is identical in both modes") {
  const Fixture fx;
  const MockBackend mock;
  CHECK(generate_all_prototypes(fx.classes, 64, mock, ExecMode::Serial) ==
        generate_all_prototypes(fx.classes, 64, mock, ExecMode::Parallel));
}

TEST_CASE("fixed dataset builds are identical in both modes") {
  const Fixture fx;
  const auto serial = build_fixed_dataset(fx.config, fx.store, 0.5, 3, 12, 99, PromptDesign{},
                                          {}, ExecMode::Serial);
  const auto parallel = build_fixed_dataset(fx.config, fx.store, 0.5, 3, 12, 99, PromptDesign{},
                                            {}, ExecMode::Parallel);
  CHECK(serial.size() == parallel.size());
  CHECK(serial == parallel);
}

TEST_CASE("corpus annotation is identical in both modes, embedding path included") {
  const Fixture fx;
  const MockBackend echo(MockOptions{MockPolicy::Echo});

  AnnotateOptions serial_options;
  serial_options.mode = ExecMode::Serial;
  AnnotateOptions parallel_options;
  parallel_options.mode = ExecMode::Parallel;

  const CorpusResult serial = annotate_corpus(fx.tables, fx.classes, echo, serial_options);
  const CorpusResult parallel = annotate_corpus(fx.tables, fx.classes, echo, parallel_options);
  REQUIRE(serial.annotations.size() == parallel.annotations.size());
  CHECK(serial.annotations == parallel.annotations);
  CHECK(serial.failures.empty());
}

TEST_CASE("noisy outputs do not depend on scheduling") {
  const Fixture fx;
  MockOptions options;
  options.policy = MockPolicy::Noisy;
  options.noise_p = 0.7;
  options.noise_seed = 5;
  MockBackend noisy(options);
  noisy.add_provenance(fx.store);

  AnnotateOptions serial_options;
  serial_options.mode = ExecMode::Serial;
  AnnotateOptions parallel_options;
  parallel_options.mode = ExecMode::Parallel;

  const CorpusResult serial = annotate_corpus(fx.tables, fx.classes, noisy, serial_options);
  const CorpusResult parallel = annotate_corpus(fx.tables, fx.classes, noisy, parallel_options);
  CHECK(serial.annotations == parallel.annotations);
}

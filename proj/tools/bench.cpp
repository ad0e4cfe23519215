// Compares the serial reference paths against the OpenMP-parallel ones on a
// synthetic domain and verifies that both produce identical results.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coltype/annotator.hpp"
#include "coltype/finetune.hpp"
#include "coltype/mock_backend.hpp"
#include "coltype/pseudotable.hpp"
#include "coltype/rng.hpp"

using namespace coltype;

namespace {

double time_ms(const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-24s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   identical: %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms, identical ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads: %d\n\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; parallel mode falls back to serial\n\n");
#endif

  // Synthetic domain: 60 classes, 400 schemas of width 2..6.
  std::vector<std::string> names;
  for (int i = 0; i < 60; ++i) names.push_back("Class" + std::to_string(i));
  const ClassSet classes = ClassSet::from_names(names);

  MockBackend mock;
  const ClassPrototypeStore store = generate_all_prototypes(classes, 200, mock);

  SchemaCollection schemas;
  rng::Stream stream(rng::derive_key({2024, 7}));
  for (int i = 0; i < 400; ++i) {
    TableSchema schema;
    const std::size_t width = 2 + stream.next_below(5);
    for (std::size_t c = 0; c < width; ++c)
      schema.headers.push_back(classes.at(stream.next_below(classes.size())));
    schemas.schemas.push_back(std::move(schema));
  }
  const DomainConfig config{classes, schemas};

  // Fixed-dataset build: 20 epochs over the full collection.
  std::vector<FineTuneSample> dataset_serial, dataset_parallel;
  const double build_serial = time_ms([&] {
    dataset_serial = build_fixed_dataset(config, store, 1.0, 3, 20, 42, PromptDesign{}, {},
                                         ExecMode::Serial);
  });
  const double build_parallel = time_ms([&] {
    dataset_parallel = build_fixed_dataset(config, store, 1.0, 3, 20, 42, PromptDesign{}, {},
                                           ExecMode::Parallel);
  });
  report("build_fixed_dataset", build_serial, build_parallel,
         dataset_serial == dataset_parallel);

  // Corpus annotation with the Echo policy: every column goes through the
  // trigram-embedding remap, the heaviest inference path.
  MockBackend echo(MockOptions{MockPolicy::Echo});
  std::vector<InputTable> tables;
  for (std::size_t i = 0; i < 400; ++i) {
    InputTable table;
    table.id = "t" + std::to_string(i);
    const PseudoTable pseudo = generate_pseudo_table(
        schemas.schemas[i % schemas.schemas.size()], store, 3, SamplerSeed{9, 0}, i);
    table.columns = pseudo.columns;
    tables.push_back(std::move(table));
  }

  AnnotateOptions serial_options;
  serial_options.mode = ExecMode::Serial;
  AnnotateOptions parallel_options;
  parallel_options.mode = ExecMode::Parallel;

  CorpusResult corpus_serial, corpus_parallel;
  const double annotate_serial = time_ms(
      [&] { corpus_serial = annotate_corpus(tables, classes, echo, serial_options); });
  const double annotate_parallel = time_ms(
      [&] { corpus_parallel = annotate_corpus(tables, classes, echo, parallel_options); });
  report("annotate_corpus", annotate_serial, annotate_parallel,
         corpus_serial.annotations == corpus_parallel.annotations);

  // Prototype generation across classes.
  ClassPrototypeStore proto_serial, proto_parallel;
  const double gen_serial = time_ms(
      [&] { proto_serial = generate_all_prototypes(classes, 2000, mock, ExecMode::Serial); });
  const double gen_parallel = time_ms(
      [&] { proto_parallel = generate_all_prototypes(classes, 2000, mock, ExecMode::Parallel); });
  report("generate_prototypes", gen_serial, gen_parallel, proto_serial == proto_parallel);

  return 0;
}

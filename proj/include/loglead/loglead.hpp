#pragma once

#include "loglead/bench/bench.hpp"
#include "loglead/bench/synthetic.hpp"
#include "loglead/core/column.hpp"
#include "loglead/core/error.hpp"
#include "loglead/core/parallel.hpp"
#include "loglead/core/random.hpp"
#include "loglead/core/split.hpp"
#include "loglead/core/table.hpp"
#include "loglead/core/table_io.hpp"
#include "loglead/core/timestamp.hpp"
#include "loglead/core/validate.hpp"
#include "loglead/detectors/decision_tree.hpp"
#include "loglead/detectors/detector.hpp"
#include "loglead/detectors/eval.hpp"
#include "loglead/detectors/isolation_forest.hpp"
#include "loglead/detectors/kmeans.hpp"
#include "loglead/detectors/logistic_regression.hpp"
#include "loglead/detectors/token_detectors.hpp"
#include "loglead/enhancers/aggregate.hpp"
#include "loglead/enhancers/drain.hpp"
#include "loglead/enhancers/lenma.hpp"
#include "loglead/enhancers/masking.hpp"
#include "loglead/enhancers/ngram.hpp"
#include "loglead/enhancers/parse.hpp"
#include "loglead/enhancers/spell.hpp"
#include "loglead/enhancers/template_store.hpp"
#include "loglead/enhancers/tokenize.hpp"
#include "loglead/features/sparse_matrix.hpp"
#include "loglead/features/vocabulary.hpp"
#include "loglead/loaders/hadoop.hpp"
#include "loglead/loaders/hdfs.hpp"
#include "loglead/loaders/loader.hpp"
#include "loglead/loaders/raw.hpp"
#include "loglead/loaders/source.hpp"
#include "loglead/loaders/supercomputer.hpp"
#include "loglead/pipeline/config.hpp"
#include "loglead/pipeline/run.hpp"

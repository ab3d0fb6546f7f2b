#pragma once

#include "rtecontra/align.hpp"
#include "rtecontra/balance.hpp"
#include "rtecontra/corpus.hpp"
#include "rtecontra/evaluate.hpp"
#include "rtecontra/features.hpp"
#include "rtecontra/label.hpp"
#include "rtecontra/matrix.hpp"
#include "rtecontra/model.hpp"
#include "rtecontra/nearest_centroid.hpp"
#include "rtecontra/normalize.hpp"
#include "rtecontra/pipeline.hpp"
#include "rtecontra/random_forest.hpp"
#include "rtecontra/rng.hpp"
#include "rtecontra/stats.hpp"
#include "rtecontra/tagger.hpp"

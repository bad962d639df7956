/*
 * Copyright 2026 The PPSR Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Umbrella header for the whole toolkit.

#pragma once

#include "ppsr/crypto/bigint.hpp"
#include "ppsr/crypto/fixed_point.hpp"
#include "ppsr/crypto/key_io.hpp"
#include "ppsr/crypto/paillier.hpp"
#include "ppsr/data/dataset.hpp"
#include "ppsr/data/dump.hpp"
#include "ppsr/data/hetrec.hpp"
#include "ppsr/data/synthetic.hpp"
#include "ppsr/data/tsv.hpp"
#include "ppsr/error.hpp"
#include "ppsr/eval/baselines.hpp"
#include "ppsr/eval/experiment.hpp"
#include "ppsr/eval/metrics.hpp"
#include "ppsr/eval/recommend.hpp"
#include "ppsr/nmf/model_io.hpp"
#include "ppsr/nmf/multiview_nmf.hpp"
#include "ppsr/protocol/ppsr_protocol.hpp"
#include "ppsr/protocol/rank_matrix.hpp"
#include "ppsr/protocol/transport.hpp"
#include "ppsr/protocol/wire.hpp"
#include "ppsr/random.hpp"
#include "ppsr/social/profiles.hpp"
#include "ppsr/social/sentiment.hpp"
#include "ppsr/social/similarity.hpp"
#include "ppsr/social/text.hpp"

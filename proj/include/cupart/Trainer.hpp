/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The cupart Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the copyright holder nor the names of its contributors
 *    may be used to endorse or promote products derived from this software
 *    without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

/** \file     Trainer.hpp
    \brief    dataset splitting, SGD training with adaptive loss weights, class statistics
*/

#pragma once

#include "cupart/AdaptiveLoss.hpp"
#include "cupart/CnnModel.hpp"
#include "cupart/Metrics.hpp"
#include "cupart/RdoOracle.hpp"

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace cupart
{

struct TrainConfig
{
  int      cuSize          = 16;
  QpConfig qp;
  int      batchSize       = 64;
  double   learningRate    = 0.01;
  uint64_t steps           = 10000;
  /// eta = 0 freezes the loss weights.
  LossWeights weights;
  uint32_t    monitorSize  = 4096;
  uint64_t    seed         = 1;
  double      holdoutFraction = 0.2;
  uint64_t    checkpointPeriod = 5000;
  /// Empty: no files are written.
  std::filesystem::path checkpointDir;
};

struct ClassCounts
{
  uint64_t nonSplit = 0;
  uint64_t split    = 0;

  uint64_t total() const { return nonSplit + split; }
};

ClassCounts classCounts( const std::vector<LabeledBlock>& records );

struct DatasetSplit
{
  std::vector<LabeledBlock> train;
  std::vector<LabeledBlock> holdout;
  ClassCounts               trainCounts;
  ClassCounts               holdoutCounts;
};

/// Seeded shuffle; the holdout gets round(n * fraction) records. Needs >= 10 records and 0 < fraction < 1.
DatasetSplit splitDataset( const std::vector<LabeledBlock>& records, double holdoutFraction, uint64_t seed );

struct TrainLogRow
{
  uint64_t step            = 0;
  double   loss            = 0.0; // mean batch loss since the previous row
  double   alpha0          = 1.0;
  double   alpha1          = 1.0;
  uint64_t n0              = 0;
  uint64_t n1              = 0;
  double   monitorLoss     = std::numeric_limits<double>::quiet_NaN();
  double   holdoutAccuracy = std::numeric_limits<double>::quiet_NaN();
  bool     degenerate      = false;
};

struct TrainResult
{
  CnnModel                           model;
  std::vector<TrainLogRow>           log;
  LossWeights                        finalWeights;
  Confusion                          holdout;
  std::vector<std::filesystem::path> checkpoints;
  uint64_t                           degenerateUpdates = 0;
};

/// Runs config.steps SGD steps on batches drawn with replacement from `train`.
TrainResult train( const TrainConfig& config, const std::vector<LabeledBlock>& train,
                   const std::vector<LabeledBlock>& holdout );
/// Splits `dataset` with config.holdoutFraction and config.seed first.
TrainResult train( const TrainConfig& config, const Dataset& dataset );

/// Predicted split iff p_split > tau.
Confusion evaluateModel( const CnnModel& model, const std::vector<LabeledBlock>& records, double tau = 0.5,
                         int batchSize = 32 );

void writeTrainLogCsv( std::ostream& out, const std::vector<TrainLogRow>& log );

struct ClassStatsRow
{
  int         cuSize = 0;
  ClassCounts counts;
};

/// "0.30"-style non-split / split ratio; "inf" when nothing is split.
std::string formatRatio( uint64_t nonSplit, uint64_t split );
std::string formatClassTable( const std::vector<ClassStatsRow>& rows );

} // namespace cupart

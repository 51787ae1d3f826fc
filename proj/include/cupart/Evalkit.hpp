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

/** \file     Evalkit.hpp
    \brief    time saving, pipeline-vs-oracle evaluation reports
*/

#pragma once

#include "cupart/Metrics.hpp"
#include "cupart/Pipeline.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>

namespace cupart
{

/// (tOrig - tProp) / tOrig * 100.
double timeSaving( double tOrig, double tProp );

struct SizeReport
{
  int       cuSize = 0;
  Confusion confusion; // pipeline decision vs oracle label, over the nodes the pipeline visited
  uint64_t  earlyTerminated = 0;
  uint64_t  earlyTermErrors = 0; // terminated although the oracle splits

  double earlyTerminatedFraction() const;
  double earlyTermErrorRate() const;
};

inline SizeReport sizeSlot( int cuSize )
{
  SizeReport report;
  report.cuSize = cuSize;
  return report;
}

struct EvalConfig
{
  QpConfig       qp;
  PipelineConfig pipeline;
  /// Above 1, decisions run in parallel and no times are reported.
  int threads = 1;
};

struct EvalReport
{
  std::array<SizeReport, 3> sizes{ sizeSlot( 64 ), sizeSlot( 32 ), sizeSlot( 16 ) };
  size_t                    frames          = 0;
  size_t                    ctus            = 0;
  size_t                    classifierCalls = 0;
  bool                      timed           = true;
  double                    originalSeconds = 0.0;
  double                    proposedSeconds = 0.0;
  double                    timeSavingPercent = 0.0;

  const SizeReport& forSize( int size ) const;
  double            earlyTerminatedFraction() const;
};

/// Times the exhaustive oracle and the two-stage decision over the same frames.
EvalReport evaluate( std::span<const Frame> frames, const SplitClassifier& classifier, const EvalConfig& config );

/// One row per CU size.
void        writeEvalCsv( std::ostream& out, const EvalReport& report );
void        writeTimingCsv( std::ostream& out, const EvalReport& report );
std::string formatEvalSummary( const EvalReport& report );

} // namespace cupart

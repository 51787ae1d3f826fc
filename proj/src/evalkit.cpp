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

/** \file     evalkit.cpp
    \brief    time saving, pipeline-vs-oracle evaluation reports
*/

#include "cupart/Evalkit.hpp"
#include "cupart/Error.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace cupart
{

double timeSaving( double tOrig, double tProp )
{
  if( !( tOrig > 0.0 ) )
  {
    throw Error( "original time must be positive" );
  }
  return ( tOrig - tProp ) / tOrig * 100.0;
}

double SizeReport::earlyTerminatedFraction() const
{
  const auto visited = confusion.total();
  return visited ? static_cast<double>( earlyTerminated ) / static_cast<double>( visited ) : 0.0;
}

double SizeReport::earlyTermErrorRate() const
{
  return earlyTerminated ? static_cast<double>( earlyTermErrors ) / static_cast<double>( earlyTerminated ) : 0.0;
}

const SizeReport& EvalReport::forSize( int size ) const
{
  for( const auto& s: sizes )
  {
    if( s.cuSize == size )
    {
      return s;
    }
  }
  throw Error( "no report for CU size " + std::to_string( size ) );
}

double EvalReport::earlyTerminatedFraction() const
{
  uint64_t visited = 0, terminated = 0;
  for( const auto& s: sizes )
  {
    visited += s.confusion.total();
    terminated += s.earlyTerminated;
  }
  return visited ? static_cast<double>( terminated ) / static_cast<double>( visited ) : 0.0;
}

EvalReport evaluate( std::span<const Frame> frames, const SplitClassifier& classifier, const EvalConfig& config )
{
  if( frames.empty() )
  {
    throw Error( "nothing to evaluate: no frames" );
  }
  using Clock = std::chrono::steady_clock;
  EvalReport report;
  report.frames = frames.size();
  report.timed  = config.threads <= 1;

  const auto    t0     = Clock::now();
  LabeledCorpus labels = labelCorpus( frames, config.qp, config.threads );
  const auto    t1     = Clock::now();
  std::vector<FrameDecision> decisions;
  for( const auto& frame: frames )
  {
    decisions.push_back( decideFrame( frame, classifier, config.pipeline, config.threads ) );
  }
  const auto t2 = Clock::now();

  if( report.timed )
  {
    report.originalSeconds   = std::chrono::duration<double>( t1 - t0 ).count();
    report.proposedSeconds   = std::chrono::duration<double>( t2 - t1 ).count();
    report.timeSavingPercent = timeSaving( report.originalSeconds, report.proposedSeconds );
  }

  std::map<std::tuple<int, int, int, int>, bool> oracle; // (frame, size, x, y) -> split
  for( const int size: { 64, 32, 16 } )
  {
    for( const auto& r: labels.forSize( size ) )
    {
      oracle[{ r.block.origin.frameIndex, size, r.block.origin.x, r.block.origin.y }] = r.splitFlag;
    }
  }

  for( const auto& decision: decisions )
  {
    report.ctus += decision.trees.size();
    report.classifierCalls += decision.classifierCalls;
    for( const auto& node: decision.trace )
    {
      if( node.stage == DecisionStage::ForcedLeaf )
      {
        continue;
      }
      auto&      size  = const_cast<SizeReport&>( report.forSize( node.size ) );
      const bool label = oracle.at( { node.frame, node.size, node.x, node.y } );
      size.confusion.add( label, node.stage == DecisionStage::CnnSplit );
      if( node.stage == DecisionStage::EarlyTerminated )
      {
        size.earlyTerminated++;
        size.earlyTermErrors += label;
      }
    }
  }
  return report;
}

void writeEvalCsv( std::ostream& out, const EvalReport& report )
{
  out << "cu_size,evaluated,true_non_split,false_split,false_non_split,true_split,accuracy,precision,recall,"
         "majority_baseline,et_fraction,et_error_rate\n";
  out.precision( 6 );
  for( const auto& s: report.sizes )
  {
    const auto& c = s.confusion;
    out << s.cuSize << ',' << c.total() << ',' << c.trueNonSplit << ',' << c.falseSplit << ',' << c.falseNonSplit
        << ',' << c.trueSplit << ',' << c.accuracy() << ',' << c.splitPrecision() << ',' << c.splitRecall() << ','
        << c.majorityBaseline() << ',' << s.earlyTerminatedFraction() << ',' << s.earlyTermErrorRate() << '\n';
  }
}

void writeTimingCsv( std::ostream& out, const EvalReport& report )
{
  out << "frames,ctus,classifier_calls,t_orig_s,t_prop_s,time_saving_percent\n";
  out.precision( 6 );
  out << report.frames << ',' << report.ctus << ',' << report.classifierCalls << ',';
  if( report.timed )
  {
    out << report.originalSeconds << ',' << report.proposedSeconds << ',' << report.timeSavingPercent;
  }
  else
  {
    out << ",,";
  }
  out << '\n';
}

std::string formatEvalSummary( const EvalReport& report )
{
  std::ostringstream out;
  char               line[160];
  std::snprintf( line, sizeof( line ), "%zu frames, %zu CTUs, %zu classifier calls\n", report.frames, report.ctus,
                 report.classifierCalls );
  out << line;
  for( const auto& s: report.sizes )
  {
    const auto& c = s.confusion;
    std::snprintf( line, sizeof( line ),
                   "%2dx%-2d  n=%-7llu acc %6.2f%%  baseline %6.2f%%  P %6.2f%%  R %6.2f%%  ET %6.2f%%  ET-err %6.2f%%\n",
                   s.cuSize, s.cuSize, static_cast<unsigned long long>( c.total() ), 100.0 * c.accuracy(),
                   100.0 * c.majorityBaseline(), 100.0 * c.splitPrecision(), 100.0 * c.splitRecall(),
                   100.0 * s.earlyTerminatedFraction(), 100.0 * s.earlyTermErrorRate() );
    out << line;
  }
  if( report.timed )
  {
    std::snprintf( line, sizeof( line ), "oracle %.3f s, two-stage %.3f s, time saving %.2f%%\n",
                   report.originalSeconds, report.proposedSeconds, report.timeSavingPercent );
  }
  else
  {
    std::snprintf( line, sizeof( line ), "timing disabled (parallel run)\n" );
  }
  out << line;
  return out.str();
}

} // namespace cupart

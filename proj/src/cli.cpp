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

/** \file     cli.cpp
    \brief    command-line front end (stats, extract, train, decide, eval)
*/

#include "cupart/Cli.hpp"
#include "cupart/Error.hpp"
#include "cupart/Evalkit.hpp"
#include "cupart/Indicator.hpp"
#include "cupart/Parallel.hpp"
#include "cupart/Pipeline.hpp"
#include "cupart/RdoOracle.hpp"
#include "cupart/Trainer.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace cupart
{

namespace
{

struct Options
{
  std::vector<std::string> inputs;
  int                      width  = 0;
  int                      height = 0;
  int                      qp     = 32;
  int                      cuSize = 0;
  std::string              models;
  std::string              thresholds = "20,25,30";
  double                   tau        = 0.5;
  uint64_t                 seed       = 1;
  std::string              out;

  // train
  uint64_t steps        = 10000;
  int      batchSize    = 64;
  double   learningRate = 0.01;
  double   eta          = 0.5;
  uint32_t updatePeriod = 1000;
  uint32_t monitorSize  = 4096;
  double   holdout      = 0.2;

  bool parallel = false;
};

EarlyTermThresholds parseThresholds( const std::string& text )
{
  std::vector<int>  values;
  std::stringstream in( text );
  std::string       item;
  while( std::getline( in, item, ',' ) )
  {
    try
    {
      size_t used = 0;
      values.push_back( std::stoi( item, &used ) );
      if( used != item.size() )
      {
        throw std::invalid_argument( item );
      }
    }
    catch( const std::exception& )
    {
      throw Error( "--thresholds expects three integers t64,t32,t16" );
    }
  }
  if( values.size() != 3 )
  {
    throw Error( "--thresholds expects three integers t64,t32,t16" );
  }
  return { values[0], values[1], values[2] };
}

std::vector<Frame> loadInputs( const Options& opt )
{
  std::vector<fs::path> paths( opt.inputs.begin(), opt.inputs.end() );
  auto                  frames = loadCorpus( paths, opt.width, opt.height );
  if( frames.empty() )
  {
    throw Error( "no frames found in the input" );
  }
  return frames;
}

std::ofstream openOutput( const fs::path& path )
{
  std::ofstream file( path );
  if( !file )
  {
    throw Error( "cannot write " + path.string() );
  }
  return file;
}

std::vector<int> selectedSizes( int cuSize )
{
  if( cuSize == 0 )
  {
    return { 64, 32, 16 };
  }
  if( !isDecisionSize( cuSize ) )
  {
    throw Error( "--cu-size must be 64, 32 or 16" );
  }
  return { cuSize };
}

int runStats( const Options& opt, std::ostream& out )
{
  const auto frames = loadInputs( opt );
  const auto corpus = labelCorpus( frames, { opt.qp }, threadCountFromEnv() );
  fs::create_directories( opt.out );
  std::vector<ClassStatsRow> rows;
  for( const int size: { 64, 32, 16 } )
  {
    const auto& blocks = corpus.forSize( size );
    rows.push_back( { size, classCounts( blocks ) } );
    for( const auto indicator: { Indicator::Range, Indicator::StdDev } )
    {
      const auto name = std::string( "density_" ) + indicatorName( indicator ) + "_" + std::to_string( size ) + ".csv";
      IndicatorStats density;
      try
      {
        density = buildDensity( blocks, indicator, defaultBinWidth( indicator ) );
      }
      catch( const Error& e )
      {
        out << "skipped " << name << ": " << e.what() << '\n';
        continue;
      }
      auto file = openOutput( fs::path( opt.out ) / name );
      writeDensityCsv( file, density );
    }
  }
  const auto table = formatClassTable( rows );
  auto       file  = openOutput( fs::path( opt.out ) / "class_stats.txt" );
  file << table;
  out << table;
  return 0;
}

int runExtract( const Options& opt, std::ostream& out )
{
  const auto frames = loadInputs( opt );
  auto       corpus = labelCorpus( frames, { opt.qp }, threadCountFromEnv() );
  fs::create_directories( opt.out );
  for( const int size: selectedSizes( opt.cuSize ) )
  {
    Dataset dataset{ size, opt.qp, std::move( corpus.forSize( size ) ) };
    const auto path = fs::path( opt.out ) / ( "cu" + std::to_string( size ) + ".cupd" );
    writeDataset( path, dataset );
    const auto counts = classCounts( dataset.records );
    out << path.string() << ": " << counts.total() << " records, " << counts.nonSplit << " non-split, "
        << counts.split << " split\n";
  }
  return 0;
}

int runTrain( const Options& opt, std::ostream& out )
{
  if( opt.inputs.size() != 1 )
  {
    throw Error( "train takes exactly one dataset file as --input" );
  }
  const auto dataset = readDataset( fs::path( opt.inputs.front() ) );
  if( opt.cuSize && opt.cuSize != dataset.cuSize )
  {
    throw Error( "--cu-size " + std::to_string( opt.cuSize ) + " does not match the dataset's "
                 + std::to_string( dataset.cuSize ) );
  }
  TrainConfig config;
  config.cuSize               = dataset.cuSize;
  config.qp                   = { dataset.qp };
  config.batchSize            = opt.batchSize;
  config.learningRate         = opt.learningRate;
  config.steps                = opt.steps;
  config.weights.eta          = opt.eta;
  config.weights.updatePeriod = opt.updatePeriod;
  config.monitorSize          = opt.monitorSize;
  config.seed                 = opt.seed;
  config.holdoutFraction      = opt.holdout;
  config.checkpointDir        = opt.out;

  const auto result = train( config, dataset );
  auto       log    = openOutput( fs::path( opt.out ) / ( "train_log_cu" + std::to_string( config.cuSize ) + ".csv" ) );
  writeTrainLogCsv( log, result.log );
  const auto& h = result.holdout;
  out << "cu" << config.cuSize << ": holdout accuracy " << 100.0 * h.accuracy() << "% (majority baseline "
      << 100.0 * h.majorityBaseline() << "%), non-split recall " << 100.0 * h.nonSplitRecall()
      << "%, split recall " << 100.0 * h.splitRecall() << "%, alpha0 " << result.finalWeights.alpha0 << ", alpha1 "
      << result.finalWeights.alpha1 << '\n';
  out << "model written to " << result.checkpoints.back().string() << '\n';
  return 0;
}

PipelineConfig pipelineConfig( const Options& opt )
{
  PipelineConfig config;
  config.thresholds = parseThresholds( opt.thresholds );
  config.tau        = opt.tau;
  return config;
}

int runDecide( const Options& opt, std::ostream& out )
{
  const auto          config = pipelineConfig( opt );
  const CnnClassifier classifier( loadModelSet( opt.models ) );
  const auto          frames = loadInputs( opt );
  std::vector<FrameDecision> decisions;
  for( const auto& frame: frames )
  {
    decisions.push_back( decideFrame( frame, classifier, config, threadCountFromEnv() ) );
  }
  fs::create_directories( opt.out );
  auto partitions = openOutput( fs::path( opt.out ) / "partitions.txt" );
  writePartitions( partitions, decisions );
  auto trace = openOutput( fs::path( opt.out ) / "trace.csv" );
  writeTraceCsv( trace, decisions );
  size_t ctus = 0, calls = 0;
  for( const auto& d: decisions )
  {
    ctus += d.trees.size();
    calls += d.classifierCalls;
  }
  out << frames.size() << " frames, " << ctus << " CTUs, " << calls << " CNN calls\n";
  return 0;
}

int runEval( const Options& opt, std::ostream& out )
{
  EvalConfig config;
  config.qp       = { opt.qp };
  config.pipeline = pipelineConfig( opt );
  config.threads  = opt.parallel ? threadCountFromEnv() : 1;
  const CnnClassifier classifier( loadModelSet( opt.models ) );
  const auto          frames = loadInputs( opt );
  const auto          report = evaluate( frames, classifier, config );
  fs::create_directories( opt.out );
  auto csv = openOutput( fs::path( opt.out ) / "eval.csv" );
  writeEvalCsv( csv, report );
  auto timing = openOutput( fs::path( opt.out ) / "timing.csv" );
  writeTimingCsv( timing, report );
  const auto summary = formatEvalSummary( report );
  auto       text    = openOutput( fs::path( opt.out ) / "summary.txt" );
  text << summary;
  out << summary;
  return 0;
}

} // namespace

int runCli( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "cupart: two-stage HEVC intra CU partition decision" };
  app.name( "cupart" );
  app.require_subcommand( 1 );
  Options opt;

  auto addInput = [&]( CLI::App* sub ) { sub->add_option( "--input", opt.inputs, "input files or directories" )->required(); };
  auto addGeometry = [&]( CLI::App* sub ) {
    sub->add_option( "--width", opt.width, "frame width for .yuv input" );
    sub->add_option( "--height", opt.height, "frame height for .yuv input" );
  };
  auto addQp  = [&]( CLI::App* sub ) { sub->add_option( "--qp", opt.qp, "quantization parameter" )->check( CLI::Range( 0, 51 ) ); };
  auto addOut = [&]( CLI::App* sub ) { sub->add_option( "--out", opt.out, "output directory" )->required(); };
  auto addPipeline = [&]( CLI::App* sub ) {
    sub->add_option( "--models", opt.models, "directory with cu64/cu32/cu16.cupm" )->required();
    sub->add_option( "--thresholds", opt.thresholds, "range thresholds t64,t32,t16" );
    sub->add_option( "--tau", opt.tau, "split threshold on p_split" );
  };

  auto* stats = app.add_subcommand( "stats", "oracle-label a corpus, write indicator densities and class counts" );
  addInput( stats );
  addGeometry( stats );
  addQp( stats );
  addOut( stats );

  auto* extract = app.add_subcommand( "extract", "write per-size labelled datasets" );
  addInput( extract );
  addGeometry( extract );
  addQp( extract );
  addOut( extract );
  extract->add_option( "--cu-size", opt.cuSize, "only this CU size" );

  auto* trainCmd = app.add_subcommand( "train", "train one CU size from a dataset file" );
  addInput( trainCmd );
  addOut( trainCmd );
  trainCmd->add_option( "--cu-size", opt.cuSize, "expected CU size of the dataset" );
  trainCmd->add_option( "--seed", opt.seed, "seed for initialization, splitting and sampling" );
  trainCmd->add_option( "--steps", opt.steps, "SGD steps" );
  trainCmd->add_option( "--batch-size", opt.batchSize, "samples per step" )->check( CLI::PositiveNumber );
  trainCmd->add_option( "--lr", opt.learningRate, "learning rate" )->check( CLI::PositiveNumber );
  trainCmd->add_option( "--eta", opt.eta, "loss-weight blend factor (0 freezes the weights)" )->check( CLI::Range( 0.0, 1.0 ) );
  trainCmd->add_option( "--update-period", opt.updatePeriod, "steps between loss-weight updates" )->check( CLI::PositiveNumber );
  trainCmd->add_option( "--monitor-size", opt.monitorSize, "monitoring batch size" );
  trainCmd->add_option( "--holdout", opt.holdout, "holdout fraction" );

  auto* decide = app.add_subcommand( "decide", "run the two-stage decision, write partitions and trace" );
  addInput( decide );
  addGeometry( decide );
  addPipeline( decide );
  addOut( decide );

  auto* eval = app.add_subcommand( "eval", "compare against the oracle and measure time saving" );
  addInput( eval );
  addGeometry( eval );
  addQp( eval );
  addPipeline( eval );
  addOut( eval );
  eval->add_flag( "--parallel", opt.parallel, "use CUPART_THREADS workers (disables timing)" );

  std::vector<std::string> reversed( args.rbegin(), args.rend() );
  try
  {
    app.parse( reversed );
  }
  catch( const CLI::CallForHelp& )
  {
    out << app.help();
    return 0;
  }
  catch( const CLI::CallForAllHelp& )
  {
    out << app.help( "", CLI::AppFormatMode::All );
    return 0;
  }
  catch( const CLI::ParseError& e )
  {
    err << "cupart: usage error: " << e.what() << '\n';
    return e.get_exit_code() ? e.get_exit_code() : 2;
  }

  try
  {
    if( stats->parsed() )
    {
      return runStats( opt, out );
    }
    if( extract->parsed() )
    {
      return runExtract( opt, out );
    }
    if( trainCmd->parsed() )
    {
      return runTrain( opt, out );
    }
    if( decide->parsed() )
    {
      return runDecide( opt, out );
    }
    return runEval( opt, out );
  }
  catch( const std::exception& e )
  {
    err << "cupart: error: " << e.what() << '\n';
    return 1;
  }
}

} // namespace cupart

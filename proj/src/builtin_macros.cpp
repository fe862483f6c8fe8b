// Copyright 2026 the stexide authors
// SPDX-License-Identifier: Apache-2.0

#include "stexide/builtin_macros.hpp"

#include <fstream>
#include <sstream>

#include "stexide/source_model.hpp"

namespace stexide {

const std::vector<BuiltinMacro>& builtin_macros() {
  static const std::vector<BuiltinMacro> kMacros = {
      // Document structure
      {"documentclass", 1},
      {"usepackage", 1},
      {"title", 1},
      {"author", 1},
      {"date", 1},
      {"maketitle", 0},
      {"tableofcontents", 0},
      {"section", 1},
      {"subsection", 1},
      {"subsubsection", 1},
      {"paragraph", 1},
      {"subparagraph", 1},
      {"chapter", 1},
      {"part", 1},
      {"appendix", 0},
      {"label", 1},
      {"ref", 1},
      {"eqref", 1},
      {"pageref", 1},
      {"cite", 1},
      {"footnote", 1},
      {"caption", 1},
      {"item", 0},
      {"input", 1},
      {"include", 1},
      {"bibliography", 1},
      {"bibliographystyle", 1},
      {"newcommand", 2},
      {"renewcommand", 2},
      {"newenvironment", 3},
      {"newtheorem", 2},
      {"begin", 1},
      {"end", 1},
      // Text formatting
      {"textbf", 1},
      {"textit", 1},
      {"texttt", 1},
      {"textsc", 1},
      {"textsf", 1},
      {"textrm", 1},
      {"textup", 1},
      {"textsl", 1},
      {"emph", 1},
      {"underline", 1},
      {"textsuperscript", 1},
      {"textsubscript", 1},
      {"mbox", 1},
      {"fbox", 1},
      {"hbox", 1},
      {"vbox", 1},
      {"centering", 0},
      {"raggedright", 0},
      {"raggedleft", 0},
      {"noindent", 0},
      {"indent", 0},
      {"par", 0},
      {"newline", 0},
      {"newpage", 0},
      {"clearpage", 0},
      {"pagebreak", 0},
      {"linebreak", 0},
      {"bigskip", 0},
      {"medskip", 0},
      {"smallskip", 0},
      {"hfill", 0},
      {"vfill", 0},
      {"hspace", 1},
      {"vspace", 1},
      {"quad", 0},
      {"qquad", 0},
      {"tiny", 0},
      {"scriptsize", 0},
      {"footnotesize", 0},
      {"small", 0},
      {"normalsize", 0},
      {"large", 0},
      {"Large", 0},
      {"LARGE", 0},
      {"huge", 0},
      {"Huge", 0},
      // Math operators and functions
      {"frac", 2},
      {"dfrac", 2},
      {"tfrac", 2},
      {"sqrt", 1},
      {"binom", 2},
      {"sum", 0},
      {"prod", 0},
      {"coprod", 0},
      {"int", 0},
      {"iint", 0},
      {"iiint", 0},
      {"oint", 0},
      {"lim", 0},
      {"limsup", 0},
      {"liminf", 0},
      {"sup", 0},
      {"inf", 0},
      {"max", 0},
      {"min", 0},
      {"arg", 0},
      {"det", 0},
      {"dim", 0},
      {"ker", 0},
      {"hom", 0},
      {"deg", 0},
      {"gcd", 0},
      {"exp", 0},
      {"log", 0},
      {"ln", 0},
      {"lg", 0},
      {"sin", 0},
      {"cos", 0},
      {"tan", 0},
      {"cot", 0},
      {"sec", 0},
      {"csc", 0},
      {"arcsin", 0},
      {"arccos", 0},
      {"arctan", 0},
      {"sinh", 0},
      {"cosh", 0},
      {"tanh", 0},
      {"coth", 0},
      {"bmod", 0},
      {"pmod", 1},
      // Math symbols
      {"alpha", 0},
      {"beta", 0},
      {"gamma", 0},
      {"delta", 0},
      {"epsilon", 0},
      {"varepsilon", 0},
      {"zeta", 0},
      {"eta", 0},
      {"theta", 0},
      {"vartheta", 0},
      {"iota", 0},
      {"kappa", 0},
      {"lambda", 0},
      {"mu", 0},
      {"nu", 0},
      {"xi", 0},
      {"pi", 0},
      {"varpi", 0},
      {"rho", 0},
      {"varrho", 0},
      {"sigma", 0},
      {"varsigma", 0},
      {"tau", 0},
      {"upsilon", 0},
      {"phi", 0},
      {"varphi", 0},
      {"chi", 0},
      {"psi", 0},
      {"omega", 0},
      {"Gamma", 0},
      {"Delta", 0},
      {"Theta", 0},
      {"Lambda", 0},
      {"Xi", 0},
      {"Pi", 0},
      {"Sigma", 0},
      {"Upsilon", 0},
      {"Phi", 0},
      {"Psi", 0},
      {"Omega", 0},
      {"infty", 0},
      {"partial", 0},
      {"nabla", 0},
      {"hbar", 0},
      {"ell", 0},
      {"Re", 0},
      {"Im", 0},
      {"aleph", 0},
      {"wp", 0},
      {"emptyset", 0},
      {"varnothing", 0},
      {"forall", 0},
      {"exists", 0},
      {"nexists", 0},
      {"neg", 0},
      {"lnot", 0},
      {"land", 0},
      {"lor", 0},
      {"wedge", 0},
      {"vee", 0},
      {"cap", 0},
      {"cup", 0},
      {"setminus", 0},
      {"subset", 0},
      {"supset", 0},
      {"subseteq", 0},
      {"supseteq", 0},
      {"subsetneq", 0},
      {"in", 0},
      {"ni", 0},
      {"notin", 0},
      {"cdot", 0},
      {"cdots", 0},
      {"ldots", 0},
      {"vdots", 0},
      {"ddots", 0},
      {"dots", 0},
      {"times", 0},
      {"div", 0},
      {"pm", 0},
      {"mp", 0},
      {"ast", 0},
      {"star", 0},
      {"circ", 0},
      {"bullet", 0},
      {"oplus", 0},
      {"ominus", 0},
      {"otimes", 0},
      {"oslash", 0},
      {"odot", 0},
      {"leq", 0},
      {"le", 0},
      {"geq", 0},
      {"ge", 0},
      {"neq", 0},
      {"ne", 0},
      {"equiv", 0},
      {"sim", 0},
      {"simeq", 0},
      {"approx", 0},
      {"cong", 0},
      {"propto", 0},
      {"prec", 0},
      {"succ", 0},
      {"preceq", 0},
      {"succeq", 0},
      {"ll", 0},
      {"gg", 0},
      {"perp", 0},
      {"parallel", 0},
      {"mid", 0},
      {"nmid", 0},
      {"vdash", 0},
      {"dashv", 0},
      {"models", 0},
      {"top", 0},
      {"bot", 0},
      {"leftarrow", 0},
      {"rightarrow", 0},
      {"leftrightarrow", 0},
      {"Leftarrow", 0},
      {"Rightarrow", 0},
      {"Leftrightarrow", 0},
      {"mapsto", 0},
      {"longmapsto", 0},
      {"longrightarrow", 0},
      {"longleftarrow", 0},
      {"hookrightarrow", 0},
      {"hookleftarrow", 0},
      {"uparrow", 0},
      {"downarrow", 0},
      {"updownarrow", 0},
      {"to", 0},
      {"gets", 0},
      {"iff", 0},
      {"implies", 0},
      {"impliedby", 0},
      {"langle", 0},
      {"rangle", 0},
      {"lceil", 0},
      {"rceil", 0},
      {"lfloor", 0},
      {"rfloor", 0},
      {"lvert", 0},
      {"rvert", 0},
      {"lVert", 0},
      {"rVert", 0},
      {"left", 0},
      {"right", 0},
      {"big", 0},
      {"Big", 0},
      {"bigg", 0},
      {"Bigg", 0},
      // Math decorations and fonts
      {"hat", 1},
      {"widehat", 1},
      {"check", 1},
      {"tilde", 1},
      {"widetilde", 1},
      {"acute", 1},
      {"grave", 1},
      {"dot", 1},
      {"ddot", 1},
      {"breve", 1},
      {"bar", 1},
      {"vec", 1},
      {"overline", 1},
      {"underbrace", 1},
      {"overbrace", 1},
      {"overset", 2},
      {"underset", 2},
      {"stackrel", 2},
      {"mathbf", 1},
      {"mathit", 1},
      {"mathrm", 1},
      {"mathsf", 1},
      {"mathtt", 1},
      {"mathcal", 1},
      {"mathbb", 1},
      {"mathfrak", 1},
      {"mathscr", 1},
      {"boldsymbol", 1},
      {"operatorname", 1},
      {"mathop", 1},
      {"mathrel", 1},
      {"mathbin", 1},
      {"mathord", 1},
      {"mathopen", 1},
      {"mathclose", 1},
      {"mathpunct", 1},
      {"mathinner", 1},
      {"text", 1},
      {"textstyle", 0},
      {"displaystyle", 0},
      {"scriptstyle", 0},
      {"scriptscriptstyle", 0},
      {"phantom", 1},
      {"hphantom", 1},
      {"vphantom", 1},
      {"smash", 1},
      {"prime", 0},
      {"dagger", 0},
      {"ddagger", 0},
      {"S", 0},
      {"P", 0},
      {"copyright", 0},
      {"pounds", 0},
      {"LaTeX", 0},
      {"TeX", 0},
      {"verb", 0},
      {"url", 1},
      {"href", 2},
      {"texorpdfstring", 2},
      {"ensuremath", 1},
      {"xspace", 0},
  };
  return kMacros;
}

std::vector<BuiltinMacro> load_macro_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("MalformedMacroFile",
                "cannot open macro file " + path.string());
  }
  std::vector<BuiltinMacro> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line.substr(0, line.find('#'));
    std::istringstream ls(stripped);
    std::string name;
    if (!(ls >> name)) continue;  // blank or comment-only line
    int arity = 0;
    if (!(ls >> arity) || arity < 0) {
      throw Error("MalformedMacroFile",
                  path.string() + ":" + std::to_string(lineno) +
                      ": expected 'name arity'");
    }
    std::string extra;
    if (ls >> extra) {
      throw Error("MalformedMacroFile",
                  path.string() + ":" + std::to_string(lineno) +
                      ": trailing content after arity");
    }
    out.push_back({std::move(name), arity});
  }
  return out;
}

}  // namespace stexide

// SPDX-License-Identifier: Apache-2.0

//! Tokenizer for the Solidity subset.
//!
//! Keywords are not distinguished from identifiers here — the parser matches
//! on identifier text, which keeps the lexer stable across the wide span of
//! language versions the analyzer accepts (0.4 through 0.8).

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Punct {
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    Colon,
    Question,
    FatArrow,   // =>
    ThinArrow,  // ->
    ColonEq,    // :=
    Assign,     // =
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    StarStar,
    Amp,
    Pipe,
    Caret,
    Tilde,
    Bang,
    Lt,
    Gt,
    Le,
    Ge,
    EqEq,
    Ne,
    AmpAmp,
    PipePipe,
    Shl, // <<
    Shr, // >>
    PlusPlus,
    MinusMinus,
    PlusEq,
    MinusEq,
    StarEq,
    SlashEq,
    PercentEq,
    AmpEq,
    PipeEq,
    CaretEq,
    ShlEq,
    ShrEq,
}

impl Punct {
    pub fn text(&self) -> &'static str {
        use Punct::*;
        match self {
            LParen => "(",
            RParen => ")",
            LBrace => "{",
            RBrace => "}",
            LBracket => "[",
            RBracket => "]",
            Semi => ";",
            Comma => ",",
            Dot => ".",
            Colon => ":",
            Question => "?",
            FatArrow => "=>",
            ThinArrow => "->",
            ColonEq => ":=",
            Assign => "=",
            Plus => "+",
            Minus => "-",
            Star => "*",
            Slash => "/",
            Percent => "%",
            StarStar => "**",
            Amp => "&",
            Pipe => "|",
            Caret => "^",
            Tilde => "~",
            Bang => "!",
            Lt => "<",
            Gt => ">",
            Le => "<=",
            Ge => ">=",
            EqEq => "==",
            Ne => "!=",
            AmpAmp => "&&",
            PipePipe => "||",
            Shl => "<<",
            Shr => ">>",
            PlusPlus => "++",
            MinusMinus => "--",
            PlusEq => "+=",
            MinusEq => "-=",
            StarEq => "*=",
            SlashEq => "/=",
            PercentEq => "%=",
            AmpEq => "&=",
            PipeEq => "|=",
            CaretEq => "^=",
            ShlEq => "<<=",
            ShrEq => ">>=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    /// Identifier or keyword (the parser decides which).
    Ident(String),
    /// Numeric literal lexeme, verbatim (decimal, hex, underscores,
    /// scientific notation).
    Number(String),
    /// String literal with escapes already processed.
    Str(String),
    /// `hex"4142"` literal; payload is the digit string.
    HexStr(String),
    Punct(Punct),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Str(_) => write!(f, "string literal"),
            Tok::HexStr(_) => write!(f, "hex literal"),
            Tok::Punct(p) => write!(f, "`{}`", p.text()),
            Tok::Eof => write!(f, "end of file"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexError {
    pub message: String,
    pub offset: usize,
}

/// Tokenize `src` fully. Unterminated strings/comments and stray bytes are
/// hard errors — recovery happens at file granularity, not token granularity.
pub fn lex(src: &str) -> Result<Vec<Token>, LexError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0usize;

    while i < bytes.len() {
        let b = bytes[i];

        // Whitespace.
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }

        // Comments.
        if b == b'/' && i + 1 < bytes.len() {
            match bytes[i + 1] {
                b'/' => {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                    }
                    continue;
                }
                b'*' => {
                    let start = i;
                    i += 2;
                    loop {
                        if i + 1 >= bytes.len() {
                            return Err(LexError {
                                message: "unterminated block comment".into(),
                                offset: start,
                            });
                        }
                        if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                            i += 2;
                            break;
                        }
                        i += 1;
                    }
                    continue;
                }
                _ => {}
            }
        }

        // Identifiers / keywords, and the hex-string prefix.
        if b.is_ascii_alphabetic() || b == b'_' || b == b'$' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$')
            {
                i += 1;
            }
            let word = &src[start..i];
            // hex"…" / unicode"…" literal forms.
            if (word == "hex" || word == "unicode") && i < bytes.len() && (bytes[i] == b'"' || bytes[i] == b'\'')
            {
                let (cooked, next) = lex_string(src, i)?;
                if word == "hex" {
                    let digits: String = cooked.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
                    toks.push(Token { tok: Tok::HexStr(digits), start, end: next });
                } else {
                    toks.push(Token { tok: Tok::Str(cooked), start, end: next });
                }
                i = next;
                continue;
            }
            toks.push(Token { tok: Tok::Ident(word.to_string()), start, end: i });
            continue;
        }

        // Numbers: 0x…, decimals, underscores, exponents, fractions.
        if b.is_ascii_digit() || (b == b'.' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit())
        {
            let start = i;
            if b == b'0' && i + 1 < bytes.len() && (bytes[i + 1] | 0x20) == b'x' {
                i += 2;
                while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_') {
                    i += 1;
                }
            } else {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] | 0x20) == b'e' {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
            }
            toks.push(Token { tok: Tok::Number(src[start..i].to_string()), start, end: i });
            continue;
        }

        // Strings.
        if b == b'"' || b == b'\'' {
            let start = i;
            let (cooked, next) = lex_string(src, i)?;
            toks.push(Token { tok: Tok::Str(cooked), start, end: next });
            i = next;
            continue;
        }

        // Punctuation, longest match first.
        let rest = &src[i..];
        let start = i;
        let p3 = [("<<=", Punct::ShlEq), (">>=", Punct::ShrEq)];
        let p2 = [
            ("=>", Punct::FatArrow),
            ("->", Punct::ThinArrow),
            (":=", Punct::ColonEq),
            ("**", Punct::StarStar),
            ("==", Punct::EqEq),
            ("!=", Punct::Ne),
            ("<=", Punct::Le),
            (">=", Punct::Ge),
            ("&&", Punct::AmpAmp),
            ("||", Punct::PipePipe),
            ("<<", Punct::Shl),
            (">>", Punct::Shr),
            ("++", Punct::PlusPlus),
            ("--", Punct::MinusMinus),
            ("+=", Punct::PlusEq),
            ("-=", Punct::MinusEq),
            ("*=", Punct::StarEq),
            ("/=", Punct::SlashEq),
            ("%=", Punct::PercentEq),
            ("&=", Punct::AmpEq),
            ("|=", Punct::PipeEq),
            ("^=", Punct::CaretEq),
        ];
        let mut matched = None;
        for (text, p) in p3 {
            if rest.starts_with(text) {
                matched = Some((text.len(), p));
                break;
            }
        }
        if matched.is_none() {
            for (text, p) in p2 {
                if rest.starts_with(text) {
                    matched = Some((text.len(), p));
                    break;
                }
            }
        }
        if matched.is_none() {
            let single = match b {
                b'(' => Some(Punct::LParen),
                b')' => Some(Punct::RParen),
                b'{' => Some(Punct::LBrace),
                b'}' => Some(Punct::RBrace),
                b'[' => Some(Punct::LBracket),
                b']' => Some(Punct::RBracket),
                b';' => Some(Punct::Semi),
                b',' => Some(Punct::Comma),
                b'.' => Some(Punct::Dot),
                b':' => Some(Punct::Colon),
                b'?' => Some(Punct::Question),
                b'=' => Some(Punct::Assign),
                b'+' => Some(Punct::Plus),
                b'-' => Some(Punct::Minus),
                b'*' => Some(Punct::Star),
                b'/' => Some(Punct::Slash),
                b'%' => Some(Punct::Percent),
                b'&' => Some(Punct::Amp),
                b'|' => Some(Punct::Pipe),
                b'^' => Some(Punct::Caret),
                b'~' => Some(Punct::Tilde),
                b'!' => Some(Punct::Bang),
                b'<' => Some(Punct::Lt),
                b'>' => Some(Punct::Gt),
                _ => None,
            };
            matched = single.map(|p| (1, p));
        }
        match matched {
            Some((len, p)) => {
                toks.push(Token { tok: Tok::Punct(p), start, end: start + len });
                i += len;
            }
            None => {
                return Err(LexError {
                    message: format!("unexpected character `{}`", src[i..].chars().next().unwrap()),
                    offset: i,
                });
            }
        }
    }

    toks.push(Token { tok: Tok::Eof, start: src.len(), end: src.len() });
    Ok(toks)
}

/// Lex a quoted string starting at `open` (which must hold `"` or `'`).
/// Returns the cooked content and the offset just past the closing quote.
fn lex_string(src: &str, open: usize) -> Result<(String, usize), LexError> {
    let bytes = src.as_bytes();
    let quote = bytes[open];
    let mut out = String::new();
    let mut i = open + 1;
    loop {
        if i >= bytes.len() {
            return Err(LexError { message: "unterminated string literal".into(), offset: open });
        }
        let b = bytes[i];
        if b == quote {
            return Ok((out, i + 1));
        }
        if b == b'\n' {
            return Err(LexError { message: "newline in string literal".into(), offset: i });
        }
        if b == b'\\' {
            if i + 1 >= bytes.len() {
                return Err(LexError { message: "unterminated escape sequence".into(), offset: i });
            }
            let esc = bytes[i + 1];
            match esc {
                b'n' => out.push('\n'),
                b't' => out.push('\t'),
                b'r' => out.push('\r'),
                b'0' => out.push('\0'),
                b'\\' => out.push('\\'),
                b'\'' => out.push('\''),
                b'"' => out.push('"'),
                b'x' => {
                    if i + 3 >= bytes.len() {
                        return Err(LexError { message: "truncated \\x escape".into(), offset: i });
                    }
                    // Check the two bytes before slicing: a non-ASCII byte
                    // here would split a UTF-8 sequence.
                    if !bytes[i + 2].is_ascii_hexdigit() || !bytes[i + 3].is_ascii_hexdigit() {
                        return Err(LexError { message: "invalid \\x escape".into(), offset: i });
                    }
                    let v = u8::from_str_radix(&src[i + 2..i + 4], 16)
                        .expect("checked hex digits");
                    out.push(v as char);
                    i += 4;
                    continue;
                }
                _ => {
                    // Unknown escape: keep the escaped character whole
                    // (lenient — this is an analyzer, not a compiler). The
                    // byte after `\` starts a character, so advance by its
                    // full encoded length, never into the middle of it.
                    let ch_len = utf8_len(esc);
                    out.push_str(&src[i + 1..i + 1 + ch_len]);
                    i += 1 + ch_len;
                    continue;
                }
            }
            i += 2;
            continue;
        }
        // Multi-byte UTF-8 passes through untouched.
        let ch_len = utf8_len(b);
        out.push_str(&src[i..i + ch_len]);
        i += ch_len;
    }
}

fn utf8_len(first_byte: u8) -> usize {
    match first_byte {
        b if b < 0x80 => 1,
        b if b >= 0xf0 => 4,
        b if b >= 0xe0 => 3,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn lexes_simple_declaration() {
        let toks = kinds("uint256 x = 42;");
        assert_eq!(
            toks,
            vec![
                Tok::Ident("uint256".into()),
                Tok::Ident("x".into()),
                Tok::Punct(Punct::Assign),
                Tok::Number("42".into()),
                Tok::Punct(Punct::Semi),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn comments_are_skipped() {
        let toks = kinds("a // line\n /* block\n comment */ b");
        assert_eq!(toks, vec![Tok::Ident("a".into()), Tok::Ident("b".into()), Tok::Eof]);
    }

    #[test]
    fn longest_punct_wins() {
        let toks = kinds("a >>= b << c := d => e");
        let puncts: Vec<Punct> = toks
            .into_iter()
            .filter_map(|t| if let Tok::Punct(p) = t { Some(p) } else { None })
            .collect();
        assert_eq!(puncts, vec![Punct::ShrEq, Punct::Shl, Punct::ColonEq, Punct::FatArrow]);
    }

    #[test]
    fn hex_and_scientific_numbers() {
        let toks = kinds("0xAb_cd 1_000 1e18 1.5e9 0.5");
        let nums: Vec<String> = toks
            .into_iter()
            .filter_map(|t| if let Tok::Number(n) = t { Some(n) } else { None })
            .collect();
        assert_eq!(nums, vec!["0xAb_cd", "1_000", "1e18", "1.5e9", "0.5"]);
    }

    #[test]
    fn string_escapes_cook() {
        let toks = kinds(r#""a\nb" 'c\'d' hex"41_42""#);
        assert_eq!(
            toks,
            vec![
                Tok::Str("a\nb".into()),
                Tok::Str("c'd".into()),
                Tok::HexStr("4142".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn unterminated_string_is_an_error() {
        assert!(lex("\"abc").is_err());
        assert!(lex("/* never closed").is_err());
    }

    #[test]
    fn escaped_multibyte_characters_do_not_desync_the_cursor() {
        // `\` followed by a multi-byte character: the cursor must advance by
        // the full encoded length (a fixed +2 lands mid-sequence and panics
        // on the next slice).
        let toks = kinds("\"\\é\"");
        assert_eq!(toks, vec![Tok::Str("é".into()), Tok::Eof]);
        // `\x` whose "digits" are a multi-byte character: error, not panic.
        assert!(lex("\"\\x£\"").is_err());
        assert!(lex("\"\\xA£\"").is_err());
    }

    #[test]
    fn spans_are_byte_accurate() {
        let toks = lex("ab  cd").unwrap();
        assert_eq!((toks[0].start, toks[0].end), (0, 2));
        assert_eq!((toks[1].start, toks[1].end), (4, 6));
    }

    #[test]
    fn dot_vs_leading_decimal() {
        // `.5` lexes as a number, `a.b` as ident dot ident.
        let toks = kinds("a.b .5");
        assert_eq!(
            toks,
            vec![
                Tok::Ident("a".into()),
                Tok::Punct(Punct::Dot),
                Tok::Ident("b".into()),
                Tok::Number(".5".into()),
                Tok::Eof
            ]
        );
    }
}

//! Universal cycles in low-dimensional tori and their cached fillings.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use super::expr::{ivec, CycleExpr};
use super::io::CertificateFile;
use super::solver::{fill_with, SolveOptions};
use super::{FillError, FillingCertificate};

pub const CACHE_ENV: &str = "TORFILL_CERT_CACHE";

/// Largest k accepted for the dimension-indexed keys.
pub const MAX_KEY_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseKey {
    /// Q(E1+E2) - Q(E1) - Q(E2) in T^2; prism lifts give every split.
    Split1,
    /// Q(E1) + Q(-E1) in T^1.
    Neg1,
    /// Q(0) in T^1.
    Zero0,
    /// Q(E1,E2) - Q(E1, E2 - kE1) in T^2.
    Dehn(u8),
    /// Q(E1,2E2) - Q(2E1,E2) in T^2.
    DoubleHalve,
    /// Q(E1..Ek) + Q(E2,E1,E3..Ek) in T^k.
    Rearr(usize),
    /// Q(E1..Ek) + Q(-E1,E2..Ek) in T^k.
    Negate(usize),
    /// Q(E1..E_{k-1}, E_k+E_{k+1}) - Q(.., E_k) - Q(.., E_{k+1}) in T^{k+1}.
    Split(usize),
    /// Q(E1..Ek, 0) in T^k.
    Zero(usize),
}

impl BaseKey {
    /// The keys bootstrapped by the self test.
    pub fn table() -> Vec<BaseKey> {
        let mut v = vec![
            BaseKey::Rearr(2),
            BaseKey::Rearr(3),
            BaseKey::Negate(2),
            BaseKey::Split(2),
            BaseKey::Zero(1),
            BaseKey::Zero(2),
        ];
        v.extend((0..4).map(BaseKey::Dehn));
        v.push(BaseKey::DoubleHalve);
        v
    }

    /// Keys used by the reduction engine.
    pub fn engine_keys() -> Vec<BaseKey> {
        let mut v = vec![BaseKey::Split1, BaseKey::Neg1, BaseKey::Zero0, BaseKey::DoubleHalve];
        v.extend((1..4).map(BaseKey::Dehn));
        v
    }

    fn check(self) -> Result<(), FillError> {
        match self {
            BaseKey::Dehn(k) if k > 3 => Err(FillError::UnsupportedKey(self.to_string())),
            BaseKey::Rearr(k) if !(2..=MAX_KEY_DIM).contains(&k) => Err(FillError::UnsupportedDimension(k)),
            BaseKey::Negate(k) | BaseKey::Split(k) | BaseKey::Zero(k) if !(1..=MAX_KEY_DIM).contains(&k) => {
                Err(FillError::UnsupportedDimension(k))
            }
            _ => Ok(()),
        }
    }

    /// The universal cycle the key's certificate fills.
    pub fn universal_cycle(self) -> Result<CycleExpr, FillError> {
        self.check()?;
        let unit = |k: usize, i: usize| {
            let mut v = vec![BigInt::from(0); k];
            v[i] = BigInt::from(1);
            v
        };
        let basis = |k: usize| (0..k).map(|i| unit(k, i)).collect::<Vec<_>>();
        Ok(match self {
            BaseKey::Split1 => CycleExpr::from_i64(2, &[(1, &[&[1, 1]]), (-1, &[&[1, 0]]), (-1, &[&[0, 1]])]),
            BaseKey::Neg1 => CycleExpr::from_i64(1, &[(1, &[&[1]]), (1, &[&[-1]])]),
            BaseKey::Zero0 => CycleExpr::from_i64(1, &[(1, &[&[0]])]),
            BaseKey::Dehn(k) => {
                let k = k as i64;
                CycleExpr::from_i64(2, &[(1, &[&[1, 0], &[0, 1]]), (-1, &[&[1, 0], &[-k, 1]])])
            }
            BaseKey::DoubleHalve => CycleExpr::from_i64(2, &[(1, &[&[1, 0], &[0, 2]]), (-1, &[&[2, 0], &[0, 1]])]),
            BaseKey::Rearr(k) => {
                let g = basis(k);
                let mut s = g.clone();
                s.swap(0, 1);
                let mut e = CycleExpr::zero(k, k);
                e.push_term(BigInt::from(1), g);
                e.push_term(BigInt::from(1), s);
                e
            }
            BaseKey::Negate(k) => {
                let g = basis(k);
                let mut s = g.clone();
                s[0] = s[0].iter().map(|x| -x).collect();
                let mut e = CycleExpr::zero(k, k);
                e.push_term(BigInt::from(1), g);
                e.push_term(BigInt::from(1), s);
                e
            }
            BaseKey::Split(k) => {
                let b = basis(k + 1);
                let head: Vec<Vec<BigInt>> = b[..k - 1].to_vec();
                let sum: Vec<BigInt> = b[k - 1].iter().zip(&b[k]).map(|(x, y)| x + y).collect();
                let mut e = CycleExpr::zero(k + 1, k);
                for (c, last) in [(1, sum), (-1, b[k - 1].clone()), (-1, b[k].clone())] {
                    let mut g = head.clone();
                    g.push(last);
                    e.push_term(BigInt::from(c), g);
                }
                e
            }
            BaseKey::Zero(k) => {
                let mut g = basis(k);
                g.push(ivec(&vec![0; k]));
                CycleExpr::single(1, g)
            }
        })
    }

    /// File stem used by the on-disk cache.
    pub fn file_stem(self) -> String {
        self.to_string().replace(['(', ')'], "_").trim_end_matches('_').to_string()
    }
}

impl fmt::Display for BaseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKey::Split1 => write!(f, "SPLIT1"),
            BaseKey::Neg1 => write!(f, "NEG1"),
            BaseKey::Zero0 => write!(f, "ZERO0"),
            BaseKey::Dehn(k) => write!(f, "DEHN({k})"),
            BaseKey::DoubleHalve => write!(f, "DOUBLE_HALVE"),
            BaseKey::Rearr(k) => write!(f, "REARR({k})"),
            BaseKey::Negate(k) => write!(f, "NEGATE({k})"),
            BaseKey::Split(k) => write!(f, "SPLIT({k})"),
            BaseKey::Zero(k) => write!(f, "ZERO({k})"),
        }
    }
}

impl FromStr for BaseKey {
    type Err = FillError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_uppercase();
        let bad = || FillError::UnsupportedKey(s.clone());
        let simple = match s.as_str() {
            "SPLIT1" => Some(BaseKey::Split1),
            "NEG1" => Some(BaseKey::Neg1),
            "ZERO0" => Some(BaseKey::Zero0),
            "DOUBLE_HALVE" | "DH" => Some(BaseKey::DoubleHalve),
            _ => None,
        };
        if let Some(k) = simple {
            return Ok(k);
        }
        let (name, arg) = s.strip_suffix(')').and_then(|t| t.split_once('(')).ok_or_else(bad)?;
        let k: usize = arg.trim().parse().map_err(|_| bad())?;
        let key = match name {
            "DEHN" => BaseKey::Dehn(u8::try_from(k).map_err(|_| bad())?),
            "REARR" => BaseKey::Rearr(k),
            "NEGATE" => BaseKey::Negate(k),
            "SPLIT" => BaseKey::Split(k),
            "ZERO" => BaseKey::Zero(k),
            _ => return Err(bad()),
        };
        key.check()?;
        Ok(key)
    }
}

/// Solves for the certificate of `key` without consulting any cache.
pub fn solve_base(key: BaseKey) -> Result<FillingCertificate, FillError> {
    let z = key.universal_cycle()?.to_chain()?;
    fill_with(&z, SolveOptions::default())
}

/// Read-mostly store of base certificates, optionally backed by a directory.
pub struct CertCache {
    dir: Option<PathBuf>,
    mem: RwLock<HashMap<BaseKey, Arc<FillingCertificate>>>,
}

impl CertCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            mem: RwLock::new(HashMap::new()),
        }
    }

    /// Uses the directory named by `TORFILL_CERT_CACHE`, if set.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    pub fn global() -> &'static CertCache {
        static CACHE: OnceLock<CertCache> = OnceLock::new();
        CACHE.get_or_init(CertCache::from_env)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path_for(&self, key: BaseKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", key.file_stem())))
    }

    pub fn get(&self, key: BaseKey) -> Result<Arc<FillingCertificate>, FillError> {
        if let Some(c) = self.mem.read().expect("cache lock").get(&key) {
            return Ok(c.clone());
        }
        let cert = match self.load(key)? {
            Some(c) => c,
            None => {
                let c = solve_base(key)?;
                self.store(key, &c)?;
                c
            }
        };
        let mut mem = self.mem.write().expect("cache lock");
        Ok(mem.entry(key).or_insert_with(|| Arc::new(cert)).clone())
    }

    /// Reads a certificate from disk; it must fill this key's universal cycle exactly.
    pub fn load(&self, key: BaseKey) -> Result<Option<FillingCertificate>, FillError> {
        let Some(path) = self.path_for(key) else {
            return Ok(None);
        };
        if !path.exists() {
            return Ok(None);
        }
        let file = CertificateFile::read(&path)?;
        let cert = file.certificate()?;
        let want = key.universal_cycle()?.to_chain()?;
        if cert.target != want || !cert.verify().ok {
            return Err(FillError::Verification(format!("cached certificate for {key} does not verify")));
        }
        Ok(Some(cert))
    }

    /// Writes atomically: a temporary file in the same directory, then a rename.
    pub fn store(&self, key: BaseKey, cert: &FillingCertificate) -> Result<(), FillError> {
        let Some(path) = self.path_for(key) else {
            return Ok(());
        };
        let dir = path.parent().expect("cache path has a parent");
        std::fs::create_dir_all(dir).map_err(|e| FillError::Io(e.to_string()))?;
        let tmp = dir.join(format!(".{}.{}.tmp", key.file_stem(), std::process::id()));
        CertificateFile::from_certificate(cert, &[]).write(&tmp)?;
        std::fs::rename(&tmp, &path).map_err(|e| FillError::Io(e.to_string()))
    }

    /// Inserts a certificate without touching disk; used by tests.
    pub fn insert(&self, key: BaseKey, cert: FillingCertificate) {
        self.mem.write().expect("cache lock").insert(key, Arc::new(cert));
    }
}

/// Certificate for `key` from the process-wide cache.
pub fn base_certificate(key: BaseKey) -> Result<Arc<FillingCertificate>, FillError> {
    CertCache::global().get(key)
}

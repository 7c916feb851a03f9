use std::sync::Arc;

use vircat::cache::{Cache, CacheKey, CODE_VERSION};
use vircat::sixj::SixJTable;

#[test]
fn sixj_table_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::at(dir.path());
    let key = CacheKey::new("sixj", "k8");
    let t = SixJTable::new(8).unwrap();
    cache.store(&key, &t).unwrap();
    let back: SixJTable = cache.load(&key).unwrap().unwrap();
    assert_eq!(back.k, t.k);
    let bits = |t: &SixJTable| t.entries().map(|(s, v)| (s, v.to_bits())).collect::<Vec<_>>();
    assert_eq!(bits(&back), bits(&t));
}

#[test]
fn version_is_part_of_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::at(dir.path());
    cache.store(&CacheKey::new("modular", "m3"), &vec![1.0f64, 2.0]).unwrap();
    let bumped = CacheKey::with_version("modular", "m3", &format!("{CODE_VERSION}-next"));
    assert_eq!(cache.load::<Vec<f64>>(&bumped).unwrap(), None);
    assert_eq!(cache.load::<Vec<f64>>(&CacheKey::new("modular", "m3")).unwrap(), Some(vec![1.0, 2.0]));
}

#[test]
fn corrupt_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::at(dir.path());
    let key = CacheKey::new("modular", "m4");
    std::fs::write(cache.path(&key).unwrap(), b"{ not json").unwrap();
    assert!(cache.load::<u32>(&key).is_err());
    let mut calls = 0;
    let v: Result<u32, ()> = cache.get_or_compute(&key, || {
        calls += 1;
        Ok(7)
    });
    assert_eq!(v, Ok(7));
    assert_eq!(calls, 1);
    assert_eq!(cache.load::<u32>(&key).unwrap(), Some(7));
    let again: Result<u32, ()> = cache.get_or_compute(&key, || panic!("cached value expected"));
    assert_eq!(again, Ok(7));
}

#[test]
fn no_temporary_files_remain() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::at(dir.path().join("nested"));
    cache.store(&CacheKey::new("a", "b"), &"x").unwrap();
    let names: Vec<String> = std::fs::read_dir(dir.path().join("nested")).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(names.len(), 1);
    assert!(names[0].ends_with(".json"));
}

#[test]
fn concurrent_readers_see_consistent_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Arc::new(Cache::at(dir.path()));
    let key = CacheKey::new("sixj", "k6");
    let t = SixJTable::new(6).unwrap();
    cache.store(&key, &t).unwrap();
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let (cache, key, t) = (cache.clone(), key.clone(), t.clone());
            std::thread::spawn(move || {
                for _ in 0..10 {
                    if i % 4 == 0 {
                        cache.store(&key, &t).unwrap();
                    }
                    let back: SixJTable = cache.load(&key).unwrap().unwrap();
                    assert!(back.entries().map(|(s, v)| (s, v.to_bits())).eq(t.entries().map(|(s, v)| (s, v.to_bits()))));
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
}

#[test]
fn cli_honours_the_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_vircat"))
        .env(vircat::cache::CACHE_ENV, dir.path())
        .args(["sixj", "--k", "3", "--check", "orthogonality"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
}

#[test]
fn disabled_cache_stores_nothing() {
    let c = Cache::disabled();
    c.store(&CacheKey::new("a", "b"), &1u8).unwrap();
    assert_eq!(c.load::<u8>(&CacheKey::new("a", "b")).unwrap(), None);
}

//! Registry of unstructured-object classes and their loaders.
//!
//! A loader only ever sees an open reader and the optional descriptor; the
//! address is resolved and opened by the caller through a [`ReaderProvider`].

use std::any::Any;
use std::collections::BTreeMap;
use std::io::Read;
use std::sync::Arc;

use crate::diagnostic::{Code, Diagnostic};
use crate::locator::resolve::{resolve_locator, ResolutionEnvironment};
use crate::locator::ObjectLocator;
use crate::model::builtins::{builtin, is_media_builtin, BUILTINS};
use crate::syntax::is_identifier;
use crate::value::RawMap;

pub type LoadedObject = Box<dyn Any + Send>;

pub trait MediaLoader: Send + Sync {
    fn load(&self, reader: &mut dyn Read, descr: Option<&RawMap>) -> Result<LoadedObject, String>;
}

/// Opens a byte stream for a resolved address.
pub trait ReaderProvider {
    fn open(&self, address: &str) -> std::io::Result<Box<dyn Read>>;
}

/// Opens addresses as local file paths.
#[derive(Debug, Clone, Copy, Default)]
pub struct FsReaderProvider;

impl ReaderProvider for FsReaderProvider {
    fn open(&self, address: &str) -> std::io::Result<Box<dyn Read>> {
        Ok(Box::new(std::fs::File::open(address)?))
    }
}

/// Result of [`StubLoader`]: the raw bytes plus the descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct StubObject {
    pub bytes: Vec<u8>,
    pub descr: Option<RawMap>,
}

/// Reads the whole stream without decoding it.
#[derive(Debug, Clone, Copy, Default)]
pub struct StubLoader;

impl MediaLoader for StubLoader {
    fn load(&self, reader: &mut dyn Read, descr: Option<&RawMap>) -> Result<LoadedObject, String> {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes).map_err(|e| e.to_string())?;
        Ok(Box::new(StubObject {
            bytes,
            descr: descr.cloned(),
        }))
    }
}

#[derive(Clone)]
pub struct MediaClassRegistry {
    loaders: BTreeMap<String, Arc<dyn MediaLoader>>,
}

impl std::fmt::Debug for MediaClassRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.loaders.keys()).finish()
    }
}

impl Default for MediaClassRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl MediaClassRegistry {
    /// Every builtin media class bound to [`StubLoader`].
    pub fn with_builtins() -> Self {
        let loaders = BUILTINS
            .iter()
            .filter(|b| is_media_builtin(b.name))
            .map(|b| {
                (
                    b.name.to_owned(),
                    Arc::new(StubLoader) as Arc<dyn MediaLoader>,
                )
            })
            .collect();
        MediaClassRegistry { loaders }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.loaders.contains_key(name)
    }

    pub fn loader(&self, name: &str) -> Option<&Arc<dyn MediaLoader>> {
        self.loaders.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.loaders.keys().map(String::as_str)
    }

    /// Registered names that are not builtin types.
    pub fn extension_names(&self) -> Vec<String> {
        self.names()
            .filter(|n| builtin(n).is_none())
            .map(str::to_owned)
            .collect()
    }

    /// Adds or replaces a class. Replacement yields a `MEDIA_OVERRIDE`
    /// warning; non-media builtin names are refused.
    pub fn register(
        &mut self,
        name: &str,
        loader: Arc<dyn MediaLoader>,
    ) -> Result<Option<Diagnostic>, Diagnostic> {
        if !is_identifier(name) {
            return Err(Diagnostic::error(
                Code::RegisterConflict,
                "",
                format!("media class name {name:?} is not an identifier"),
            ));
        }
        if builtin(name).is_some() && !is_media_builtin(name) {
            return Err(Diagnostic::error(
                Code::RegisterConflict,
                "",
                format!("{name} is a builtin non-media type and cannot be registered"),
            ));
        }
        let previous = self.loaders.insert(name.to_owned(), loader);
        Ok(previous.map(|_| {
            Diagnostic::warning(
                Code::MediaOverride,
                "",
                format!("media class {name} is replaced by a new loader"),
            )
        }))
    }
}

pub fn register_media_class(
    registry: &mut MediaClassRegistry,
    name: &str,
    loader: Arc<dyn MediaLoader>,
) -> Result<Option<Diagnostic>, Diagnostic> {
    registry.register(name, loader)
}

/// Resolves `loc`, opens it via `provider` and hands the reader to the
/// class's loader.
pub fn load_object(
    registry: &MediaClassRegistry,
    class: &str,
    loc: &ObjectLocator,
    descr: Option<&RawMap>,
    env: &ResolutionEnvironment,
    provider: &dyn ReaderProvider,
) -> Result<LoadedObject, Diagnostic> {
    let loader = registry.loader(class).ok_or_else(|| {
        Diagnostic::error(
            Code::UnknownMediaClass,
            "",
            format!("no media class named {class} is registered"),
        )
    })?;
    let address = resolve_locator(loc, env)?;
    let mut reader = provider.open(&address).map_err(|e| {
        Diagnostic::error(
            Code::LoaderFailure,
            address.clone(),
            format!("cannot open {address}: {e}"),
        )
    })?;
    loader.load(&mut reader, descr).map_err(|e| {
        Diagnostic::error(
            Code::LoaderFailure,
            address.clone(),
            format!("loading {class} from {address} failed: {e}"),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locator::parse_locator;
    use std::sync::Mutex;

    struct MemProvider(Mutex<Vec<String>>);

    impl ReaderProvider for MemProvider {
        fn open(&self, address: &str) -> std::io::Result<Box<dyn Read>> {
            self.0.lock().unwrap().push(address.to_owned());
            Ok(Box::new(std::io::Cursor::new(address.as_bytes().to_vec())))
        }
    }

    struct Failing;

    impl MediaLoader for Failing {
        fn load(&self, _: &mut dyn Read, _: Option<&RawMap>) -> Result<LoadedObject, String> {
            Err("corrupt".into())
        }
    }

    #[test]
    fn registration_rules() {
        let mut r = MediaClassRegistry::with_builtins();
        assert!(r
            .register("PointCloudV2", Arc::new(StubLoader))
            .unwrap()
            .is_none());
        assert_eq!(r.extension_names(), ["PointCloudV2"]);
        assert_eq!(
            r.register("Image", Arc::new(StubLoader))
                .unwrap()
                .unwrap()
                .code,
            Code::MediaOverride
        );
        assert_eq!(
            r.register("Int", Arc::new(StubLoader)).unwrap_err().code,
            Code::RegisterConflict
        );
    }

    #[test]
    fn loader_receives_reader_and_descr() {
        let r = MediaClassRegistry::with_builtins();
        let env = ResolutionEnvironment::with_data_root("/d");
        let provider = MemProvider(Mutex::new(Vec::new()));
        let mut descr = RawMap::new();
        descr.insert("size", vec![640i64, 480].into());
        let obj = load_object(
            &r,
            "Image",
            &parse_locator("abc/0001.jpg").unwrap(),
            Some(&descr),
            &env,
            &provider,
        )
        .unwrap();
        let obj = obj.downcast::<StubObject>().unwrap();
        assert_eq!(obj.bytes, b"/d/abc/0001.jpg");
        assert_eq!(obj.descr.unwrap(), descr);
        assert_eq!(*provider.0.lock().unwrap(), ["/d/abc/0001.jpg"]);
    }

    #[test]
    fn load_errors() {
        let mut r = MediaClassRegistry::with_builtins();
        let env = ResolutionEnvironment::with_data_root("/d");
        let p = MemProvider(Mutex::new(Vec::new()));
        let loc = parse_locator("abc/0001.jpg").unwrap();
        let e = load_object(&r, "Hologram", &loc, None, &env, &p)
            .err()
            .unwrap();
        assert_eq!(e.code, Code::UnknownMediaClass);
        r.register("Image", Arc::new(Failing)).unwrap();
        let e = load_object(&r, "Image", &loc, None, &env, &p)
            .err()
            .unwrap();
        assert_eq!(e.code, Code::LoaderFailure);
        assert!(e.path.ends_with("/abc/0001.jpg"));
    }
}

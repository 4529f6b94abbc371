from hypothesis import settings

settings.register_profile("package", deadline=None)
settings.load_profile("package")

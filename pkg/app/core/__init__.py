# Cross-cutting helpers: singleton services, logging, exceptions
